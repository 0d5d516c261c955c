#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "cloze/nn.hpp"
#include "cloze/optimizer.hpp"
#include "cloze/readers.hpp"

namespace cloze {

/// Shared key-value configuration loaded from a JSON file. Unknown keys
/// are rejected; every default is listed in help_text().
struct Config {
  std::string precision = "f32";  // f32 | f64
  size_t embed_dim = 128;
  size_t hidden_dim = 128;
  std::string cell = "gru";  // gru | lstm
  size_t ga_hops = 3;
  bool ga_unit_gates = false;
  std::string optimizer = "adam";  // adam | sgd
  double learning_rate = 1e-3;
  double clip_norm = 10.0;
  size_t batch_size = 32;
  size_t max_epochs = 10;
  uint64_t seed = 42;
  double cache_lambda = 0.1;
  size_t cache_size = 100;
  size_t ngram_order = 4;
  size_t lm_embed_dim = 64;
  size_t lm_hidden_dim = 64;
  size_t lm_epochs = 5;
  std::string resource_dir;  // empty: auto-detect bundled resources
  size_t topk = 3;

  static Config load(const std::string& path);
  static Config from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;
  void validate() const;

  /// Key list with defaults and one-line descriptions, for --help.
  static std::string help_text();

  ReaderConfig reader_config(ReaderKind kind, bool features) const;
  OptimizerConfig optimizer_config() const;
  bool use_f64() const { return precision == "f64"; }
};

}  // namespace cloze
