#include <doctest.h>

#include "cloze/error.hpp"
#include "cloze/trainer.hpp"
#include "test_support.hpp"

using namespace cloze;
using namespace cloze::test;

TEST_CASE("early stopping reproduces the worked sequences") {
  // two consecutive decreases after the peak: stop at 4, select epoch 2
  auto r1 = apply_early_stopping({0.20, 0.30, 0.25, 0.22}, 10);
  CHECK(r1.first == 4);
  CHECK(r1.second == 2);

  // monotonically increasing: run everything, select the last epoch
  auto r2 = apply_early_stopping(
      {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95}, 10);
  CHECK(r2.first == 10);
  CHECK(r2.second == 10);

  // decrease, recovery, then two decreases: stop at 5, select epoch 1
  auto r3 = apply_early_stopping({0.3, 0.25, 0.26, 0.24, 0.23}, 10);
  CHECK(r3.first == 5);
  CHECK(r3.second == 1);
}

TEST_CASE("equal accuracy is not a decrease and resets the run") {
  auto r = apply_early_stopping({0.3, 0.25, 0.25, 0.24, 0.23}, 10);
  CHECK(r.first == 5);  // decreases at epochs 4 and 5
  CHECK(r.second == 1);
  EarlyStopper stopper(2);
  CHECK(!stopper.observe(0.5));
  CHECK(!stopper.observe(0.4));  // one decrease
  CHECK(!stopper.observe(0.4));  // equality breaks the run
  CHECK(!stopper.observe(0.3));  // one decrease again
  CHECK(stopper.observe(0.2));   // second in a row
}

TEST_CASE("max_epochs caps the stop epoch") {
  auto r = apply_early_stopping({0.1, 0.2, 0.3, 0.4, 0.5}, 3);
  CHECK(r.first == 3);
  CHECK(r.second == 3);
}

namespace {

std::vector<Instance> tiny_train_set(int n, uint64_t seed) {
  Rng rng(seed);
  std::vector<Instance> out;
  for (int i = 0; i < n; ++i)
    out.push_back(random_instance(rng, 2, 4, "tr" + std::to_string(i)));
  return out;
}

TrainConfig tiny_train_config(const std::string& out_dir = "") {
  TrainConfig tc;
  tc.max_epochs = 3;
  tc.batch_size = 4;
  tc.seed = 99;
  tc.out_dir = out_dir;
  tc.opt.learning_rate = 5e-3;
  return tc;
}

ReaderConfig tiny_reader_config() {
  ReaderConfig cfg;
  cfg.kind = ReaderKind::AttentionSum;
  cfg.embed_dim = 6;
  cfg.hidden_dim = 4;
  return cfg;
}

}  // namespace

TEST_CASE("training logs are deterministic at 64-bit precision") {
  const auto train = tiny_train_set(12, 1);
  const auto dev = tiny_train_set(6, 2);
  const Vocabulary vocab = Vocabulary::build(train);
  auto run = [&]() {
    return train_reader<double>(tiny_reader_config(), train, dev, vocab,
                                punctuation(), tiny_train_config());
  };
  const auto a = run();
  const auto b = run();
  REQUIRE(a.log.epochs.size() == b.log.epochs.size());
  for (size_t e = 0; e < a.log.epochs.size(); ++e) {
    CHECK(a.log.epochs[e].train_loss == b.log.epochs[e].train_loss);  // bitwise
    CHECK(a.log.epochs[e].dev_accuracy == b.log.epochs[e].dev_accuracy);
  }
  CHECK(a.log.selected_epoch == b.log.selected_epoch);
  // selected epoch accuracy dominates the log
  double best = -1;
  for (const auto& e : a.log.epochs) best = std::max(best, e.dev_accuracy);
  CHECK(a.log.epochs[a.log.selected_epoch - 1].dev_accuracy == best);
}

TEST_CASE("resumed training reproduces an uninterrupted run bit for bit") {
  const auto train = tiny_train_set(10, 3);
  const auto dev = tiny_train_set(5, 4);
  const Vocabulary vocab = Vocabulary::build(train);
  TempDir full_dir("train_full");
  TempDir part_dir("train_part");

  auto tc_full = tiny_train_config(full_dir.path());
  tc_full.max_epochs = 4;
  const auto full = train_reader<double>(tiny_reader_config(), train, dev, vocab,
                                         punctuation(), tc_full);

  auto tc_part = tiny_train_config(part_dir.path());
  tc_part.max_epochs = 2;
  train_reader<double>(tiny_reader_config(), train, dev, vocab, punctuation(),
                       tc_part);
  auto tc_resume = tiny_train_config(part_dir.path());
  tc_resume.max_epochs = 4;
  const auto resumed = resume_reader<double>(part_dir.path("state.ckpt"), train,
                                             dev, punctuation(), tc_resume);

  REQUIRE(full.log.epochs.size() == resumed.log.epochs.size());
  for (size_t e = 0; e < full.log.epochs.size(); ++e) {
    CHECK(full.log.epochs[e].train_loss == resumed.log.epochs[e].train_loss);
    CHECK(full.log.epochs[e].dev_accuracy == resumed.log.epochs[e].dev_accuracy);
  }
  CHECK(full.log.selected_epoch == resumed.log.selected_epoch);
  auto full_named = const_cast<ReaderParams<double>&>(full.best_params).named();
  auto res_named = const_cast<ReaderParams<double>&>(resumed.best_params).named();
  for (size_t i = 0; i < full_named.size(); ++i) {
    const auto& ta = *full_named[i].second;
    const auto& tb = *res_named[i].second;
    REQUIRE(ta.size() == tb.size());
    for (size_t k = 0; k < ta.size(); ++k) CHECK(ta[k] == tb[k]);
  }
}

TEST_CASE("resume rejects non-state checkpoints and corrupted files") {
  const auto train = tiny_train_set(6, 5);
  const auto dev = tiny_train_set(3, 6);
  const Vocabulary vocab = Vocabulary::build(train);
  TempDir dir("train_rej");
  auto tc = tiny_train_config(dir.path());
  tc.max_epochs = 1;
  train_reader<double>(tiny_reader_config(), train, dev, vocab, punctuation(), tc);

  // an epoch checkpoint is a reader model, not a training state
  CHECK_THROWS_AS(resume_reader<double>(dir.path("epoch_001.ckpt"), train, dev,
                                        punctuation(), tc),
                  VerifyError);

  auto bytes = read_file(dir.path("state.ckpt"));
  write_file(dir.path("garbled.ckpt"), bytes.substr(0, bytes.size() / 2));
  try {
    resume_reader<double>(dir.path("garbled.ckpt"), train, dev, punctuation(), tc);
    FAIL("expected VerifyError");
  } catch (const VerifyError& e) {
    CHECK(std::string(e.what()).find("offset") != std::string::npos);
  }
}

TEST_CASE("empty train or dev sets are rejected") {
  const auto train = tiny_train_set(4, 7);
  const Vocabulary vocab = Vocabulary::build(train);
  CHECK_THROWS_AS(train_reader<double>(tiny_reader_config(), {}, train, vocab,
                                       punctuation(), tiny_train_config()),
                  DataError);
  CHECK_THROWS_AS(train_reader<double>(tiny_reader_config(), train, {}, vocab,
                                       punctuation(), tiny_train_config()),
                  DataError);
}

TEST_CASE("trainlog jsonl is written with a meta record per run") {
  const auto train = tiny_train_set(6, 8);
  const auto dev = tiny_train_set(3, 9);
  const Vocabulary vocab = Vocabulary::build(train);
  TempDir dir("train_log");
  auto tc = tiny_train_config(dir.path());
  tc.max_epochs = 2;
  tc.invocation = "unit-test-invocation";
  train_reader<double>(tiny_reader_config(), train, dev, vocab, punctuation(), tc);
  const auto text = read_file(dir.path("trainlog.jsonl"));
  CHECK(text.find("unit-test-invocation") != std::string::npos);
  CHECK(text.find("\"epoch\":2") != std::string::npos);
  CHECK(std::filesystem::exists(dir.path("best.ckpt")));
  CHECK(std::filesystem::exists(dir.path("epoch_002.ckpt")));
}
