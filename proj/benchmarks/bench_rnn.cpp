#include <benchmark/benchmark.h>

#include "cloze/nn.hpp"
#include "cloze/rng.hpp"

using namespace cloze;

namespace {

template <typename S>
struct BiRnnFixture {
  RnnCellParams<S> fwd, bwd;
  Tensor<S> x;
  Tensor<S> probe;
  BiRnnFixture(CellKind kind, size_t t, size_t in, size_t h) {
    Rng rng(7);
    fwd = RnnCellParams<S>::create(kind, in, h);
    bwd = RnnCellParams<S>::create(kind, in, h);
    init_rnn_params(fwd, rng);
    init_rnn_params(bwd, rng);
    x = Tensor<S>(t, in);
    fill_uniform(x, rng, -1, 1);
    probe = Tensor<S>(t, 2 * h);
    fill_uniform(probe, rng, -1, 1);
  }
};

}  // namespace

static void BM_BiGruForward(benchmark::State& state) {
  BiRnnFixture<float> f(CellKind::Gru, static_cast<size_t>(state.range(0)), 64, 64);
  for (auto _ : state) {
    auto out = birnn_forward(f.x, f.fwd, f.bwd, nullptr);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BiGruForward)->Arg(32)->Arg(64)->Arg(128);

static void BM_BiGruForwardBackward(benchmark::State& state) {
  BiRnnFixture<float> f(CellKind::Gru, static_cast<size_t>(state.range(0)), 64, 64);
  auto d_fwd = f.fwd.zeros_like();
  auto d_bwd = f.bwd.zeros_like();
  for (auto _ : state) {
    BiRnnTrace<float> trace;
    auto out = birnn_forward(f.x, f.fwd, f.bwd, &trace);
    auto dx = birnn_backward(f.x, f.fwd, f.bwd, trace, f.probe, d_fwd, d_bwd);
    benchmark::DoNotOptimize(dx.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BiGruForwardBackward)->Arg(32)->Arg(64);

static void BM_BiLstmForward(benchmark::State& state) {
  BiRnnFixture<float> f(CellKind::Lstm, static_cast<size_t>(state.range(0)), 64, 64);
  for (auto _ : state) {
    auto out = birnn_forward(f.x, f.fwd, f.bwd, nullptr);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_BiLstmForward)->Arg(64);
