#include "cloze/config.hpp"

#include <fstream>
#include <sstream>

#include "cloze/error.hpp"

namespace cloze {

namespace {

struct KeyDoc {
  const char* key;
  const char* def;
  const char* doc;
};

constexpr KeyDoc kKeys[] = {
    {"precision", "\"f32\"", "numeric precision: f32 (training) or f64 (verification)"},
    {"embed_dim", "128", "reader word embedding width v"},
    {"hidden_dim", "128", "reader RNN hidden width H per direction"},
    {"cell", "\"gru\"", "recurrent cell: gru or lstm"},
    {"ga_hops", "3", "gated-attention hop count K"},
    {"ga_unit_gates", "false", "debug: replace gates with all-ones vectors"},
    {"optimizer", "\"adam\"", "optimizer: adam or sgd"},
    {"learning_rate", "0.001", "optimizer step size"},
    {"clip_norm", "10.0", "global gradient clip norm (0 disables)"},
    {"batch_size", "32", "instances per optimizer step"},
    {"max_epochs", "10", "training epoch cap"},
    {"seed", "42", "root seed; all randomness derives from it"},
    {"cache_lambda", "0.1", "cache interpolation weight"},
    {"cache_size", "100", "cache window length in tokens"},
    {"ngram_order", "4", "n-gram model order (1..4)"},
    {"lm_embed_dim", "64", "LSTM LM embedding width"},
    {"lm_hidden_dim", "64", "LSTM LM hidden width"},
    {"lm_epochs", "5", "LSTM LM training epochs"},
    {"resource_dir", "\"\"", "punctuation/stopword list dir (empty: bundled)"},
    {"topk", "3", "largest k reported in top-k accuracy"},
};

}  // namespace

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DataError("config " + path + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

Config Config::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DataError("config root must be a JSON object");
  Config c;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "precision") c.precision = value.get<std::string>();
      else if (key == "embed_dim") c.embed_dim = value.get<size_t>();
      else if (key == "hidden_dim") c.hidden_dim = value.get<size_t>();
      else if (key == "cell") c.cell = value.get<std::string>();
      else if (key == "ga_hops") c.ga_hops = value.get<size_t>();
      else if (key == "ga_unit_gates") c.ga_unit_gates = value.get<bool>();
      else if (key == "optimizer") c.optimizer = value.get<std::string>();
      else if (key == "learning_rate") c.learning_rate = value.get<double>();
      else if (key == "clip_norm") c.clip_norm = value.get<double>();
      else if (key == "batch_size") c.batch_size = value.get<size_t>();
      else if (key == "max_epochs") c.max_epochs = value.get<size_t>();
      else if (key == "seed") c.seed = value.get<uint64_t>();
      else if (key == "cache_lambda") c.cache_lambda = value.get<double>();
      else if (key == "cache_size") c.cache_size = value.get<size_t>();
      else if (key == "ngram_order") c.ngram_order = value.get<size_t>();
      else if (key == "lm_embed_dim") c.lm_embed_dim = value.get<size_t>();
      else if (key == "lm_hidden_dim") c.lm_hidden_dim = value.get<size_t>();
      else if (key == "lm_epochs") c.lm_epochs = value.get<size_t>();
      else if (key == "resource_dir") c.resource_dir = value.get<std::string>();
      else if (key == "topk") c.topk = value.get<size_t>();
      else throw DataError("unknown config key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw DataError("config key '" + key + "' has the wrong type: " + e.what());
    }
  }
  c.validate();
  return c;
}

void Config::validate() const {
  if (precision != "f32" && precision != "f64")
    throw DataError("config precision must be f32 or f64");
  if (cell != "gru" && cell != "lstm")
    throw DataError("config cell must be gru or lstm");
  if (optimizer != "adam" && optimizer != "sgd")
    throw DataError("config optimizer must be adam or sgd");
  if (embed_dim == 0 || hidden_dim == 0) throw DataError("config dims must be positive");
  if (ga_hops == 0) throw DataError("config ga_hops must be at least 1");
  if (learning_rate <= 0) throw DataError("config learning_rate must be positive");
  if (clip_norm < 0) throw DataError("config clip_norm must be non-negative");
  if (batch_size == 0) throw DataError("config batch_size must be positive");
  if (max_epochs == 0) throw DataError("config max_epochs must be at least 1");
  if (cache_lambda < 0 || cache_lambda > 1)
    throw DataError("config cache_lambda must be in [0,1]");
  if (ngram_order < 1 || ngram_order > 4)
    throw DataError("config ngram_order must be in [1,4]");
  if (topk == 0) throw DataError("config topk must be at least 1");
}

nlohmann::ordered_json Config::to_json() const {
  nlohmann::ordered_json j;
  j["precision"] = precision;
  j["embed_dim"] = embed_dim;
  j["hidden_dim"] = hidden_dim;
  j["cell"] = cell;
  j["ga_hops"] = ga_hops;
  j["ga_unit_gates"] = ga_unit_gates;
  j["optimizer"] = optimizer;
  j["learning_rate"] = learning_rate;
  j["clip_norm"] = clip_norm;
  j["batch_size"] = batch_size;
  j["max_epochs"] = max_epochs;
  j["seed"] = seed;
  j["cache_lambda"] = cache_lambda;
  j["cache_size"] = cache_size;
  j["ngram_order"] = ngram_order;
  j["lm_embed_dim"] = lm_embed_dim;
  j["lm_hidden_dim"] = lm_hidden_dim;
  j["lm_epochs"] = lm_epochs;
  j["resource_dir"] = resource_dir;
  j["topk"] = topk;
  return j;
}

std::string Config::help_text() {
  std::ostringstream out;
  out << "Config file keys (JSON object; unknown keys are rejected):\n";
  for (const auto& k : kKeys)
    out << "  " << k.key << " (default " << k.def << "): " << k.doc << "\n";
  return out.str();
}

ReaderConfig Config::reader_config(ReaderKind kind, bool features) const {
  ReaderConfig cfg;
  cfg.kind = kind;
  cfg.embed_dim = embed_dim;
  cfg.hidden_dim = hidden_dim;
  cfg.cell = cell == "gru" ? CellKind::Gru : CellKind::Lstm;
  cfg.use_features = features;
  cfg.ga_hops = ga_hops;
  cfg.ga_unit_gates = ga_unit_gates;
  return cfg;
}

OptimizerConfig Config::optimizer_config() const {
  OptimizerConfig cfg;
  cfg.kind = optimizer == "adam" ? OptKind::Adam : OptKind::Sgd;
  cfg.learning_rate = learning_rate;
  cfg.clip_norm = clip_norm;
  return cfg;
}

}  // namespace cloze
