#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cloze/checkpoint.hpp"
#include "cloze/model_io.hpp"
#include "cloze/optimizer.hpp"
#include "cloze/readers.hpp"
#include "cloze/text.hpp"

namespace cloze {

struct TrainConfig {
  size_t max_epochs = 10;
  size_t batch_size = 32;
  uint64_t seed = 42;
  size_t patience_decreases = 2;  // stop after this many consecutive drops
  std::string out_dir;            // empty: keep everything in memory
  OptimizerConfig opt;
  std::string invocation;  // echoed into checkpoints and the log
};

/// Stop rule: dev accuracy strictly below the immediately preceding
/// epoch's accuracy counts as a decrease; an equal epoch breaks the run.
class EarlyStopper {
 public:
  explicit EarlyStopper(size_t patience = 2) : patience_(patience) {}

  /// Observe one epoch's dev accuracy; true means stop after this epoch.
  bool observe(double accuracy) {
    if (seen_ && accuracy < prev_)
      ++consecutive_;
    else
      consecutive_ = 0;
    prev_ = accuracy;
    seen_ = true;
    return consecutive_ >= patience_;
  }

 private:
  size_t patience_;
  size_t consecutive_ = 0;
  double prev_ = 0;
  bool seen_ = false;
};

struct EpochRecord {
  size_t epoch = 0;
  double train_loss = 0;
  double dev_accuracy = 0;
  double wall_seconds = 0;
  std::string checkpoint;
};

struct TrainLog {
  std::vector<EpochRecord> epochs;
  size_t selected_epoch = 0;  // argmax dev accuracy, earliest on ties
  bool stopped_early = false;
};

/// Applies the stop rule and selection to a full accuracy sequence;
/// returns (stop_epoch, selected_epoch), both 1-based.
inline std::pair<size_t, size_t> apply_early_stopping(
    const std::vector<double>& dev_accuracies, size_t max_epochs,
    size_t patience = 2) {
  EarlyStopper stopper(patience);
  size_t stop = std::min(dev_accuracies.size(), max_epochs);
  for (size_t e = 0; e < std::min(dev_accuracies.size(), max_epochs); ++e) {
    if (stopper.observe(dev_accuracies[e])) {
      stop = e + 1;
      break;
    }
  }
  size_t best = 1;
  for (size_t e = 1; e < stop; ++e)
    if (dev_accuracies[e] > dev_accuracies[best - 1]) best = e + 1;
  return {stop, best};
}

template <typename S>
struct TrainOutcome {
  ReaderParams<S> best_params;
  TrainLog log;
};

namespace detail {

template <typename S>
double dev_accuracy(const Reader<S>& reader,
                    const std::vector<PreparedInstance>& dev) {
  size_t correct = 0;
  for (const auto& prep : dev) {
    const Prediction pred = reader.predict(prep);
    if (!pred.ranked.empty() && pred.top() == prep.target_word) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(dev.size());
}

inline void write_trainlog(const std::string& out_dir, const TrainLog& log,
                           const std::string& invocation) {
  if (out_dir.empty()) return;
  std::ofstream out(std::filesystem::path(out_dir) / "trainlog.jsonl",
                    std::ios::trunc);
  nlohmann::ordered_json meta;
  meta["meta"] = {{"invocation", invocation},
                  {"selected_epoch", log.selected_epoch},
                  {"stopped_early", log.stopped_early}};
  out << meta.dump() << '\n';
  for (const auto& e : log.epochs) {
    nlohmann::ordered_json j;
    j["epoch"] = e.epoch;
    j["train_loss"] = e.train_loss;
    j["dev_accuracy"] = e.dev_accuracy;
    j["wall_seconds"] = e.wall_seconds;
    j["checkpoint"] = e.checkpoint;
    out << j.dump() << '\n';
  }
}

}  // namespace detail

/// One epoch of batched gradient steps. Batches follow a seeded
/// permutation derived from (seed, epoch); gradients are averaged over the
/// batch. Returns the mean per-instance loss.
template <typename S>
double run_epoch(Reader<S>& reader, const std::vector<PreparedInstance>& train,
                 Optimizer<S>& opt, ReaderParams<S>& grads,
                 std::vector<ParamRef<S>>& refs, uint64_t seed, size_t epoch,
                 size_t batch_size) {
  std::vector<size_t> order(train.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng shuffle_rng(derive_seed(seed, 0xE90C00 + epoch));
  shuffle_rng.shuffle(order);
  double loss_sum = 0;
  for (size_t begin = 0; begin < order.size(); begin += batch_size) {
    const size_t end = std::min(begin + batch_size, order.size());
    zero_grads(refs);
    for (size_t k = begin; k < end; ++k)
      loss_sum += reader.loss_grad(train[order[k]], grads);
    const S inv = S(1) / static_cast<S>(end - begin);
    for (auto& r : refs)
      for (size_t i = 0; i < r.grad->size(); ++i) (*r.grad)[i] *= inv;
    opt.step(refs);
  }
  return loss_sum / static_cast<double>(train.size());
}

template <typename S>
void save_train_state(const std::string& path, ReaderParams<S>& params,
                      ReaderParams<S>& best, Optimizer<S>& opt,
                      const Vocabulary& vocab, const TrainLog& log,
                      const TrainConfig& cfg, size_t epochs_done) {
  Checkpoint ckpt;
  ckpt.precision = "f64";  // exact for f32 params and double moments
  ckpt.meta["artifact"] = "train-state";
  ckpt.meta["reader"] = reader_config_to_json(params.config);
  ckpt.meta["vocab"] = vocab.tokens();
  ckpt.meta["epochs_done"] = epochs_done;
  ckpt.meta["opt_step"] = opt.step_count();
  ckpt.meta["invocation"] = cfg.invocation;
  nlohmann::ordered_json jlog = nlohmann::ordered_json::array();
  for (const auto& e : log.epochs)
    jlog.push_back({{"epoch", e.epoch},
                    {"train_loss", e.train_loss},
                    {"dev_accuracy", e.dev_accuracy},
                    {"wall_seconds", e.wall_seconds},
                    {"checkpoint", e.checkpoint}});
  ckpt.meta["log"] = jlog;
  for (auto& [name, tensor] : params.named()) ckpt.add_tensor("param." + name, *tensor);
  for (auto& [name, tensor] : best.named()) ckpt.add_tensor("best." + name, *tensor);
  auto refs = params.refs(params);  // names only
  opt.ensure_state(refs);
  for (size_t i = 0; i < refs.size(); ++i) {
    if (opt.config().kind != OptKind::Adam) break;
    ckpt.add("opt.m." + refs[i].name, refs[i].value->shape(), opt.moments_m()[i]);
    ckpt.add("opt.v." + refs[i].name, refs[i].value->shape(), opt.moments_v()[i]);
  }
  save_checkpoint(path, ckpt);
}

template <typename S>
TrainOutcome<S> train_loop(Reader<S>& reader, ReaderParams<S>& grads,
                           std::vector<ParamRef<S>>& refs, Optimizer<S>& opt,
                           const std::vector<PreparedInstance>& train_prep,
                           const std::vector<PreparedInstance>& dev_prep,
                           const Vocabulary& vocab, const TrainConfig& cfg,
                           size_t start_epoch, TrainLog log,
                           ReaderParams<S> best_params);

/// The full training protocol: at most max_epochs epochs, stopping when
/// dev accuracy drops twice in a row, returning the parameters of the
/// epoch with the highest dev accuracy. Deterministic given the seed.
template <typename S>
TrainOutcome<S> train_reader(const ReaderConfig& reader_cfg,
                             const std::vector<Instance>& train_set,
                             const std::vector<Instance>& dev_set,
                             const Vocabulary& vocab, const TokenSet& punctuation,
                             const TrainConfig& cfg) {
  if (train_set.empty()) throw DataError("train: empty training set");
  if (dev_set.empty()) throw DataError("train: empty dev set");

  std::vector<PreparedInstance> train_prep, dev_prep;
  train_prep.reserve(train_set.size());
  for (const auto& inst : train_set)
    train_prep.push_back(prepare_instance(inst, vocab, punctuation,
                                          reader_cfg.use_features));
  dev_prep.reserve(dev_set.size());
  for (const auto& inst : dev_set)
    dev_prep.push_back(prepare_instance(inst, vocab, punctuation,
                                        reader_cfg.use_features));

  Reader<S> reader(reader_cfg, vocab.size(), cfg.seed);
  ReaderParams<S> grads = reader.params().zeros_like();
  auto refs = reader.params().refs(grads);
  Optimizer<S> opt(cfg.opt);
  return train_loop(reader, grads, refs, opt, train_prep, dev_prep, vocab, cfg,
                    /*start_epoch=*/1, TrainLog{}, reader.params());
}

template <typename S>
TrainOutcome<S> train_loop(Reader<S>& reader, ReaderParams<S>& grads,
                           std::vector<ParamRef<S>>& refs, Optimizer<S>& opt,
                           const std::vector<PreparedInstance>& train_prep,
                           const std::vector<PreparedInstance>& dev_prep,
                           const Vocabulary& vocab, const TrainConfig& cfg,
                           size_t start_epoch, TrainLog log,
                           ReaderParams<S> best_params) {
  namespace fs = std::filesystem;
  if (!cfg.out_dir.empty()) fs::create_directories(cfg.out_dir);
  EarlyStopper stopper(cfg.patience_decreases);
  double best_acc = -1;
  size_t best_epoch = 0;
  for (const auto& e : log.epochs) {  // replay history on resume
    stopper.observe(e.dev_accuracy);
    if (e.dev_accuracy > best_acc) {
      best_acc = e.dev_accuracy;
      best_epoch = e.epoch;
    }
  }
  for (size_t epoch = start_epoch; epoch <= cfg.max_epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    const double train_loss = run_epoch(reader, train_prep, opt, grads, refs,
                                        cfg.seed, epoch, cfg.batch_size);
    const double acc = detail::dev_accuracy(reader, dev_prep);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    EpochRecord rec{epoch, train_loss, acc, wall, ""};
    if (acc > best_acc) {
      best_acc = acc;
      best_epoch = epoch;
      best_params = reader.params();
    }
    if (!cfg.out_dir.empty()) {
      char name[32];
      std::snprintf(name, sizeof(name), "epoch_%03zu.ckpt", epoch);
      rec.checkpoint = (fs::path(cfg.out_dir) / name).string();
      nlohmann::ordered_json extra;
      extra["epoch"] = epoch;
      extra["invocation"] = cfg.invocation;
      save_reader_checkpoint(rec.checkpoint, reader.params(), vocab, extra);
    }
    log.epochs.push_back(rec);
    log.selected_epoch = best_epoch;
    const bool stop = stopper.observe(acc);
    log.stopped_early = stop && epoch < cfg.max_epochs;
    if (!cfg.out_dir.empty()) {
      save_train_state((fs::path(cfg.out_dir) / "state.ckpt").string(),
                       reader.params(), best_params, opt, vocab, log, cfg, epoch);
      detail::write_trainlog(cfg.out_dir, log, cfg.invocation);
    }
    if (stop) break;
  }
  if (!cfg.out_dir.empty()) {
    nlohmann::ordered_json extra;
    extra["epoch"] = best_epoch;
    extra["invocation"] = cfg.invocation;
    save_reader_checkpoint((fs::path(cfg.out_dir) / "best.ckpt").string(),
                           best_params, vocab, extra);
    detail::write_trainlog(cfg.out_dir, log, cfg.invocation);
  }
  return {std::move(best_params), std::move(log)};
}

/// Restores parameters, optimizer moments and the log from a state
/// checkpoint and continues; a resumed run reproduces an uninterrupted one
/// bit for bit at the same precision.
template <typename S>
TrainOutcome<S> resume_reader(const std::string& state_path,
                              const std::vector<Instance>& train_set,
                              const std::vector<Instance>& dev_set,
                              const TokenSet& punctuation, const TrainConfig& cfg) {
  if (train_set.empty()) throw DataError("resume: empty training set");
  if (dev_set.empty()) throw DataError("resume: empty dev set");
  Checkpoint ckpt = load_checkpoint(state_path);
  if (ckpt.meta.value("artifact", "") != std::string("train-state"))
    throw VerifyError("not a training state checkpoint: " + state_path);
  const ReaderConfig reader_cfg = reader_config_from_json(ckpt.meta.at("reader"));
  Vocabulary vocab =
      Vocabulary::from_tokens(ckpt.meta.at("vocab").get<std::vector<Token>>());
  ReaderParams<S> params = ReaderParams<S>::create(reader_cfg, vocab.size());
  ReaderParams<S> best = ReaderParams<S>::create(reader_cfg, vocab.size());
  for (auto& [name, tensor] : params.named()) ckpt.read_tensor("param." + name, *tensor);
  for (auto& [name, tensor] : best.named()) ckpt.read_tensor("best." + name, *tensor);

  Reader<S> reader(std::move(params));
  ReaderParams<S> grads = reader.params().zeros_like();
  auto refs = reader.params().refs(grads);
  Optimizer<S> opt(cfg.opt);
  opt.ensure_state(refs);
  if (cfg.opt.kind == OptKind::Adam) {
    for (size_t i = 0; i < refs.size(); ++i) {
      const int mi = ckpt.index_of("opt.m." + refs[i].name);
      const int vi = ckpt.index_of("opt.v." + refs[i].name);
      if (mi < 0 || vi < 0)
        throw VerifyError("state checkpoint missing optimizer moments for " +
                          refs[i].name);
      opt.moments_m()[i] = ckpt.data[mi];
      opt.moments_v()[i] = ckpt.data[vi];
    }
  }
  opt.set_step_count(ckpt.meta.at("opt_step").get<uint64_t>());
  const size_t epochs_done = ckpt.meta.at("epochs_done").get<size_t>();
  TrainLog log;
  for (const auto& e : ckpt.meta.at("log")) {
    log.epochs.push_back({e.at("epoch").get<size_t>(),
                          e.at("train_loss").get<double>(),
                          e.at("dev_accuracy").get<double>(),
                          e.at("wall_seconds").get<double>(),
                          e.at("checkpoint").get<std::string>()});
  }

  std::vector<PreparedInstance> train_prep, dev_prep;
  for (const auto& inst : train_set)
    train_prep.push_back(prepare_instance(inst, vocab, punctuation,
                                          reader_cfg.use_features));
  for (const auto& inst : dev_set)
    dev_prep.push_back(prepare_instance(inst, vocab, punctuation,
                                        reader_cfg.use_features));
  return train_loop(reader, grads, refs, opt, train_prep, dev_prep, vocab, cfg,
                    epochs_done + 1, std::move(log), std::move(best));
}

}  // namespace cloze
