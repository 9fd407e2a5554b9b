// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "qmlim/models.hpp"
#include "qmlim/rng.hpp"

namespace {

using namespace qmlim;

void bm_spectral_decompose(benchmark::State& state) {
  const Eigen::Index dim = state.range(0);
  Rng rng(11);
  Matrix h = rng.gaussian_hermitian(dim);
  Tolerances tol;
  for (auto _ : state) benchmark::DoNotOptimize(spectral_decompose(h, tol));
}
BENCHMARK(bm_spectral_decompose)->Arg(4)->Arg(8)->Arg(16);

void bm_conserving_unitary(benchmark::State& state) {
  const Eigen::Index dim = state.range(0);
  Rng rng(12);
  Matrix l1 = rng.gaussian_hermitian(dim);
  Matrix l2 = rng.gaussian_hermitian(dim);
  for (auto _ : state)
    benchmark::DoNotOptimize(random_conserving_unitary(l1, l2, 7));
}
BENCHMARK(bm_conserving_unitary)->Arg(2)->Arg(3)->Arg(4);

void bm_noise_bound(benchmark::State& state) {
  auto models = random_model_ensemble(state.range(0), state.range(0), 1, 5, true);
  const NamedModel& m = models.front();
  Rng rng(6);
  Vector psi = rng.haar_state(m.process.dim_h());
  const ConservedPair& c = m.conserved.front();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        bound_general(m.process, m.observable, c.l1, c.l2, psi));
}
BENCHMARK(bm_noise_bound)->Arg(2)->Arg(3)->Arg(4);

void bm_araki_yanase(benchmark::State& state) {
  NamedModel m = build_cnot_model();
  for (auto _ : state)
    benchmark::DoNotOptimize(detect_araki_yanase(m.process, m.observable));
}
BENCHMARK(bm_araki_yanase);

void bm_repeatability(benchmark::State& state) {
  NamedModel m = build_cnot_model();
  for (auto _ : state)
    benchmark::DoNotOptimize(check_repeatability(m.process, m.observable));
}
BENCHMARK(bm_repeatability);

}  // namespace

BENCHMARK_MAIN();
