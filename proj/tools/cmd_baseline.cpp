#include "cloze/baselines.hpp"
#include "cloze/builder.hpp"
#include "cloze/eval.hpp"
#include "cloze/lstm_lm.hpp"
#include "common.hpp"

namespace cloze::cli {

namespace {

struct BaselineOpts {
  std::string kind;
  std::string data_path;
  std::vector<std::string> train_corpus;
  std::string config_path;
  std::string name;
  int64_t seed = -1;
  double lambda = -1;  // <0: use the config value
  size_t topk = 3;
  bool labels = false;
};

std::vector<Token> gather_lm_stream(const std::vector<std::string>& sources,
                                    const TokenSet& punct) {
  if (sources.empty())
    throw DataError("--train-corpus is required for language-model baselines");
  std::vector<Token> stream;
  for (const auto& src : sources) {
    if (std::filesystem::is_directory(src)) {
      for (const auto& doc : read_corpus_dir(src))
        for (const auto& s : doc.sentences)
          stream.insert(stream.end(), s.begin(), s.end());
    } else {
      for (const auto& inst : read_eval_data(src, punct)) {
        auto toks = instance_token_stream(inst);
        stream.insert(stream.end(), toks.begin(), toks.end());
      }
    }
  }
  if (stream.empty()) throw DataError("LM training stream is empty");
  return stream;
}

}  // namespace

void register_baseline(CLI::App& app, int& rc, std::string invocation) {
  auto opts = std::make_shared<BaselineOpts>();
  auto* cmd = app.add_subcommand(
      "baseline", "Evaluate a context-restricted baseline on a dataset");
  cmd->add_option("--kind", opts->kind,
                  "random | first | last | mostfreq | ngram | ngram-cache | lstm")
      ->required()
      ->check(CLI::IsMember(
          {"random", "first", "last", "mostfreq", "ngram", "ngram-cache", "lstm"}));
  cmd->add_option("--data", opts->data_path, "instances (.jsonl) or passages")
      ->required();
  cmd->add_option("--train-corpus", opts->train_corpus,
                  "LM training data: corpus dir or .jsonl (repeatable)");
  cmd->add_option("--seed", opts->seed, "override the config seed");
  cmd->add_option("--lambda", opts->lambda, "cache interpolation weight");
  cmd->add_option("--config", opts->config_path, "config file (JSON)");
  cmd->add_option("--name", opts->name, "report name (default: the kind)");
  cmd->add_option("--topk", opts->topk, "largest k for top-k accuracy");
  cmd->add_flag("--labels", opts->labels, "slice accuracy by phenomenon label");

  cmd->callback([opts, &rc, invocation]() {
    const Config config = load_config_or_default(opts->config_path);
    const TokenSet punct = load_punctuation(config.resource_dir);
    const TokenSet stop = load_stopwords(config.resource_dir);
    const uint64_t seed =
        opts->seed >= 0 ? static_cast<uint64_t>(opts->seed) : config.seed;
    const double lambda = opts->lambda >= 0 ? opts->lambda : config.cache_lambda;
    const auto instances = read_eval_data(opts->data_path, punct);
    if (instances.empty()) throw DataError("no instances in " + opts->data_path);

    PredictFn predict;
    if (auto picker = picker_kind_from_name(opts->kind)) {
      predict = [&, picker](const Instance& inst) -> std::optional<Prediction> {
        try {
          const auto cands = extract_candidates(inst, punct);
          return run_picker(*picker, inst, cands, stop, seed);
        } catch (const DataError&) {
          return std::nullopt;
        }
      };
    } else if (opts->kind == "ngram" || opts->kind == "ngram-cache") {
      const auto stream = gather_lm_stream(opts->train_corpus, punct);
      auto model = std::make_shared<NGramModel>(
          NGramModel::train(stream, config.ngram_order));
      const bool cache = opts->kind == "ngram-cache";
      predict = [&, model, cache](const Instance& inst) -> std::optional<Prediction> {
        try {
          const auto cands = extract_candidates(inst, punct);
          return ngram_score_blank(*model, inst, cands, stop, cache,
                                   config.cache_size, lambda);
        } catch (const DataError&) {
          return std::nullopt;
        }
      };
    } else {  // lstm
      const auto stream_sources = opts->train_corpus;
      if (stream_sources.empty())
        throw DataError("--train-corpus is required for the lstm baseline");
      std::vector<Instance> train_insts;
      for (const auto& src : stream_sources) {
        auto batch = read_eval_data(src, punct);
        train_insts.insert(train_insts.end(), batch.begin(), batch.end());
      }
      if (train_insts.empty()) throw DataError("LM training set is empty");
      auto vocab = std::make_shared<Vocabulary>(Vocabulary::build(train_insts));
      LstmLmConfig lm_cfg;
      lm_cfg.embed_dim = config.lm_embed_dim;
      lm_cfg.hidden_dim = config.lm_hidden_dim;
      lm_cfg.epochs = config.lm_epochs;
      lm_cfg.seed = seed;
      lm_cfg.opt = config.optimizer_config();
      auto lm = std::make_shared<LstmLm<float>>(lm_cfg, vocab->size());
      std::vector<std::vector<uint32_t>> sequences;
      sequences.reserve(train_insts.size());
      for (const auto& inst : train_insts) {
        std::vector<uint32_t> seq;
        for (const auto& t : instance_token_stream(inst))
          seq.push_back(vocab->id(t));
        sequences.push_back(std::move(seq));
      }
      const auto losses = lm->train(sequences);
      for (size_t e = 0; e < losses.size(); ++e)
        std::cerr << "[lstm-lm] epoch " << (e + 1) << " loss/token " << losses[e]
                  << '\n';
      predict = [&, lm, vocab](const Instance& inst) -> std::optional<Prediction> {
        try {
          const auto cands = extract_candidates(inst, punct);
          return lstm_lm_score_blank(*lm, *vocab, inst, cands, stop);
        } catch (const DataError&) {
          return std::nullopt;
        }
      };
    }

    const auto report = evaluate(instances, predict, static_cast<int>(opts->topk),
                                 opts->labels);
    nlohmann::ordered_json j;
    j["name"] = opts->name.empty() ? opts->kind : opts->name;
    const auto body = report_to_json(report);
    for (const auto& [key, value] : body.items()) j[key] = value;
    j["invocation"] = invocation;
    std::cout << j.dump(2) << std::endl;
    rc = kOk;
  });
}

}  // namespace cloze::cli
