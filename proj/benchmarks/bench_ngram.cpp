#include <benchmark/benchmark.h>

#include "cloze/ngram.hpp"
#include "cloze/rng.hpp"

using namespace cloze;

namespace {

std::vector<Token> synthetic_stream(size_t n, size_t types, uint64_t seed) {
  Rng rng(seed);
  std::vector<Token> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i)
    out.push_back("w" + std::to_string(rng.below(rng.below(types) + 1)));
  return out;
}

}  // namespace

static void BM_KnTrain(benchmark::State& state) {
  const auto stream =
      synthetic_stream(static_cast<size_t>(state.range(0)), 2000, 11);
  for (auto _ : state) {
    auto model = NGramModel::train(stream, 4);
    benchmark::DoNotOptimize(model.vocab_size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KnTrain)->Arg(10000)->Arg(50000);

static void BM_KnProb(benchmark::State& state) {
  const auto stream = synthetic_stream(50000, 2000, 13);
  const auto model = NGramModel::train(stream, 4);
  Rng rng(17);
  std::vector<std::vector<Token>> histories;
  std::vector<Token> words;
  for (int i = 0; i < 256; ++i) {
    const size_t pos = rng.below(stream.size() - 4);
    histories.push_back({stream[pos], stream[pos + 1], stream[pos + 2]});
    words.push_back(stream[pos + 3]);
  }
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.prob(words[i & 255], histories[i & 255]));
    ++i;
  }
}
BENCHMARK(BM_KnProb);
