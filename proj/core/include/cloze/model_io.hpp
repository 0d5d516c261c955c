#pragma once

#include <string>

#include <json.hpp>

#include "cloze/checkpoint.hpp"
#include "cloze/readers.hpp"
#include "cloze/vocab.hpp"

namespace cloze {

inline nlohmann::ordered_json reader_config_to_json(const ReaderConfig& cfg) {
  nlohmann::ordered_json j;
  j["kind"] = reader_kind_name(cfg.kind);
  j["embed_dim"] = cfg.embed_dim;
  j["hidden_dim"] = cfg.hidden_dim;
  j["cell"] = cell_kind_name(cfg.cell);
  j["use_features"] = cfg.use_features;
  j["ga_hops"] = cfg.ga_hops;
  j["ga_unit_gates"] = cfg.ga_unit_gates;
  return j;
}

inline ReaderConfig reader_config_from_json(const nlohmann::ordered_json& j) {
  ReaderConfig cfg;
  const auto kind = reader_kind_from_name(j.at("kind").get<std::string>());
  if (!kind) throw VerifyError("unknown reader kind in manifest");
  cfg.kind = *kind;
  cfg.embed_dim = j.at("embed_dim").get<size_t>();
  cfg.hidden_dim = j.at("hidden_dim").get<size_t>();
  const auto cell = j.at("cell").get<std::string>();
  if (cell == "gru")
    cfg.cell = CellKind::Gru;
  else if (cell == "lstm")
    cfg.cell = CellKind::Lstm;
  else
    throw VerifyError("unknown cell kind in manifest: " + cell);
  cfg.use_features = j.at("use_features").get<bool>();
  cfg.ga_hops = j.at("ga_hops").get<size_t>();
  cfg.ga_unit_gates = j.value("ga_unit_gates", false);
  return cfg;
}

/// Writes a reader checkpoint. The manifest embeds the reader config and
/// the full vocabulary so a checkpoint is self-contained for prediction.
template <typename S>
void save_reader_checkpoint(const std::string& path, ReaderParams<S>& params,
                            const Vocabulary& vocab,
                            nlohmann::ordered_json extra = {}) {
  Checkpoint ckpt;
  ckpt.precision = precision_of<S>();
  ckpt.meta["artifact"] = "reader";
  ckpt.meta["reader"] = reader_config_to_json(params.config);
  ckpt.meta["vocab"] = vocab.tokens();
  if (!extra.is_null()) ckpt.meta["extra"] = extra;
  for (auto& [name, tensor] : params.named()) ckpt.add_tensor(name, *tensor);
  save_checkpoint(path, ckpt);
}

struct LoadedReaderMeta {
  ReaderConfig config;
  std::string precision;
  Vocabulary vocab;
  nlohmann::ordered_json extra;
};

inline LoadedReaderMeta read_reader_meta(const Checkpoint& ckpt) {
  if (ckpt.meta.value("artifact", "") != std::string("reader"))
    throw VerifyError("checkpoint is not a reader model");
  LoadedReaderMeta meta;
  meta.config = reader_config_from_json(ckpt.meta.at("reader"));
  meta.precision = ckpt.precision;
  meta.vocab =
      Vocabulary::from_tokens(ckpt.meta.at("vocab").get<std::vector<Token>>());
  meta.extra = ckpt.meta.value("extra", nlohmann::ordered_json::object());
  return meta;
}

/// Rebuilds typed reader parameters from a loaded checkpoint; every tensor
/// named by the config must be present with a matching shape.
template <typename S>
ReaderParams<S> reader_params_from_checkpoint(const Checkpoint& ckpt,
                                              const LoadedReaderMeta& meta) {
  if (ckpt.precision != precision_of<S>())
    throw VerifyError("checkpoint precision is " + ckpt.precision +
                      ", loader expects " + precision_of<S>());
  ReaderParams<S> params =
      ReaderParams<S>::create(meta.config, meta.vocab.size());
  auto named = params.named();
  if (named.size() != ckpt.names.size())
    throw VerifyError("checkpoint parameter count mismatch: stored " +
                      std::to_string(ckpt.names.size()) + ", model needs " +
                      std::to_string(named.size()));
  for (auto& [name, tensor] : named) ckpt.read_tensor(name, *tensor);
  return params;
}

}  // namespace cloze
