#include "cloze/trainer.hpp"
#include "common.hpp"

namespace cloze::cli {

namespace {

struct TrainOpts {
  std::string reader;
  bool features = false;
  std::string train_path;
  std::string dev_path;
  std::string config_path;
  std::string out_dir;
  std::string resume_path;
  int64_t seed = -1;  // -1: take the config value
};

template <typename S>
int run_train(const TrainOpts& opts, const Config& config,
              const std::string& invocation) {
  const TokenSet punct = load_punctuation(config.resource_dir);
  const auto train_set = read_instances(opts.train_path);
  const auto dev_set = read_eval_data(opts.dev_path, punct);

  TrainConfig tc;
  tc.max_epochs = config.max_epochs;
  tc.batch_size = config.batch_size;
  tc.seed = opts.seed >= 0 ? static_cast<uint64_t>(opts.seed) : config.seed;
  tc.out_dir = opts.out_dir;
  tc.opt = config.optimizer_config();
  tc.invocation = invocation;

  TrainOutcome<S> outcome;
  if (!opts.resume_path.empty()) {
    outcome = resume_reader<S>(opts.resume_path, train_set, dev_set, punct, tc);
  } else {
    const auto kind = reader_kind_from_name(opts.reader);
    if (!kind) throw DataError("unknown reader kind: " + opts.reader);
    const ReaderConfig reader_cfg = config.reader_config(*kind, opts.features);
    Vocabulary vocab = Vocabulary::build(train_set);
    outcome = train_reader<S>(reader_cfg, train_set, dev_set, vocab, punct, tc);
  }

  nlohmann::ordered_json j;
  j["selected_epoch"] = outcome.log.selected_epoch;
  j["stopped_early"] = outcome.log.stopped_early;
  j["best_checkpoint"] = opts.out_dir + "/best.ckpt";
  nlohmann::ordered_json epochs = nlohmann::ordered_json::array();
  for (const auto& e : outcome.log.epochs)
    epochs.push_back({{"epoch", e.epoch},
                      {"train_loss", e.train_loss},
                      {"dev_accuracy", e.dev_accuracy},
                      {"wall_seconds", e.wall_seconds}});
  j["epochs"] = epochs;
  j["invocation"] = invocation;
  std::cout << j.dump(2) << std::endl;
  return kOk;
}

}  // namespace

void register_train(CLI::App& app, int& rc, std::string invocation) {
  auto opts = std::make_shared<TrainOpts>();
  auto* cmd = app.add_subcommand("train", "Train a neural reader");
  cmd->add_option("--reader", opts->reader,
                  "reader kind: stanford | stanford-mod | as | ga")
      ->check(CLI::IsMember({"stanford", "stanford-mod", "as", "ga"}));
  cmd->add_flag("--features", opts->features,
                "concatenate the four position features to context embeddings");
  cmd->add_option("--train", opts->train_path, "training instances (JSON Lines)")
      ->required();
  cmd->add_option("--dev", opts->dev_path, "dev set (JSON Lines or passages)")
      ->required();
  cmd->add_option("--config", opts->config_path, "config file (JSON)");
  cmd->add_option("--out", opts->out_dir, "output directory for checkpoints/logs")
      ->required();
  cmd->add_option("--resume", opts->resume_path,
                  "resume from a state.ckpt written by an earlier run");
  cmd->add_option("--seed", opts->seed, "override the config seed");

  cmd->callback([opts, &rc, invocation]() {
    if (opts->resume_path.empty() && opts->reader.empty())
      throw CLI::ValidationError("--reader is required unless --resume is given");
    const Config config = load_config_or_default(opts->config_path);
    rc = config.use_f64() ? run_train<double>(*opts, config, invocation)
                          : run_train<float>(*opts, config, invocation);
  });
}

}  // namespace cloze::cli
