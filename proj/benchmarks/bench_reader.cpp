#include <benchmark/benchmark.h>

#include "cloze/readers.hpp"
#include "cloze/rng.hpp"

using namespace cloze;

namespace {

struct ReaderFixture {
  Vocabulary vocab;
  Instance inst;
  ReaderFixture() {
    Rng rng(23);
    std::vector<Token> pool;
    for (int i = 0; i < 200; ++i) pool.push_back("w" + std::to_string(i));
    for (const auto& w : pool) vocab.add(w);
    for (int s = 0; s < 4; ++s) {
      Sentence sent;
      for (int w = 0; w < 13; ++w) sent.push_back(pool[rng.below(pool.size())]);
      sent.push_back(".");
      inst.context.push_back(sent);
    }
    Sentence target;
    for (int w = 0; w < 11; ++w) target.push_back(pool[rng.below(pool.size())]);
    target.push_back(inst.context[1][2]);
    inst.target_sentence = target;
    inst.target_word = target.back();
    inst.id = "bench";
  }
};

ReaderConfig bench_config(ReaderKind kind) {
  ReaderConfig cfg;
  cfg.kind = kind;
  cfg.embed_dim = 64;
  cfg.hidden_dim = 64;
  cfg.use_features = true;
  cfg.ga_hops = 2;
  return cfg;
}

const TokenSet& bench_punct() {
  static const TokenSet punct = {".", ",", "!", "?"};
  return punct;
}

}  // namespace

static void BM_AsPredict(benchmark::State& state) {
  ReaderFixture f;
  Reader<float> reader(bench_config(ReaderKind::AttentionSum), f.vocab.size(), 3);
  const auto prep = prepare_instance(f.inst, f.vocab, bench_punct(), true);
  for (auto _ : state) {
    auto pred = reader.predict(prep);
    benchmark::DoNotOptimize(pred.ranked.data());
  }
}
BENCHMARK(BM_AsPredict);

static void BM_AsLossGrad(benchmark::State& state) {
  ReaderFixture f;
  Reader<float> reader(bench_config(ReaderKind::AttentionSum), f.vocab.size(), 3);
  const auto prep = prepare_instance(f.inst, f.vocab, bench_punct(), true);
  auto grads = reader.params().zeros_like();
  for (auto _ : state) {
    benchmark::DoNotOptimize(reader.loss_grad(prep, grads));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_AsLossGrad);

static void BM_GaLossGrad(benchmark::State& state) {
  ReaderFixture f;
  Reader<float> reader(bench_config(ReaderKind::GatedAttention), f.vocab.size(), 3);
  const auto prep = prepare_instance(f.inst, f.vocab, bench_punct(), true);
  auto grads = reader.params().zeros_like();
  for (auto _ : state) {
    benchmark::DoNotOptimize(reader.loss_grad(prep, grads));
  }
}
BENCHMARK(BM_GaLossGrad);

static void BM_StanfordPredict(benchmark::State& state) {
  ReaderFixture f;
  ReaderConfig cfg = bench_config(ReaderKind::Stanford);
  cfg.use_features = false;
  Reader<float> reader(cfg, f.vocab.size(), 3);
  const auto prep = prepare_instance(f.inst, f.vocab, bench_punct(), false);
  for (auto _ : state) {
    auto pred = reader.predict(prep);
    benchmark::DoNotOptimize(pred.ranked.data());
  }
}
BENCHMARK(BM_StanfordPredict);
