#include <benchmark/benchmark.h>

#include "benford/chains.hpp"
#include "benford/contfrac.hpp"
#include "benford/randomchain.hpp"
#include "benford/resonance.hpp"
#include "benford/sequences.hpp"
#include "benford/significand.hpp"
#include "benford/spectral.hpp"

using namespace benford;

namespace {

StochasticMatrix random_chain(int d, std::uint64_t seed) {
  auto rng = sample_stream(seed, 0);
  return sample_chain(d, rng);
}

void BM_EigenProjectors(benchmark::State& state) {
  int d = static_cast<int>(state.range(0));
  StochasticMatrix P = random_chain(d, 17);
  for (auto _ : state) {
    auto dec = spectral_projectors(P, eigen_decompose(P));
    benchmark::DoNotOptimize(dec.projectors.data());
  }
}
BENCHMARK(BM_EigenProjectors)->DenseRange(3, 8);

void BM_ComponentSeries(benchmark::State& state) {
  StochasticMatrix P = random_chain(3, 17);
  auto dec = spectral_projectors(P, eigen_decompose(P));
  long N = state.range(0);
  for (auto _ : state) {
    auto s = component_log_series(dec, 0, 0, SeriesKind::pn_minus_pstar, N);
    benchmark::DoNotOptimize(s.entries.data());
  }
  state.SetItemsProcessed(state.iterations() * N);
}
BENCHMARK(BM_ComponentSeries)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_FallbackSeries(benchmark::State& state) {
  StochasticMatrix P = random_chain(3, 17);
  long N = state.range(0);
  for (auto _ : state) {
    auto s = fallback_log_series(P, 0, 0, SeriesKind::pn_minus_pstar, N);
    benchmark::DoNotOptimize(s.entries.data());
  }
  state.SetItemsProcessed(state.iterations() * N);
}
BENCHMARK(BM_FallbackSeries)->Arg(100)->Arg(1000);

void BM_ClassicTally(benchmark::State& state) {
  long N = state.range(0);
  for (auto _ : state) {
    auto logs = classic_sequence_logs(ClassicSequence::factorial, N);
    DigitFrequencyTable t;
    for (double lg : logs) t.add(first_digit_from_frac(frac1(lg)));
    benchmark::DoNotOptimize(t.total);
  }
  state.SetItemsProcessed(state.iterations() * N);
}
BENCHMARK(BM_ClassicTally)->Arg(1000000);

void BM_ContfracExpand(benchmark::State& state) {
  for (auto _ : state) {
    auto cf = expand_constant(NamedConstant::ex12_log_abs_lambda2, 50);
    benchmark::DoNotOptimize(cf.partial_quotients.data());
  }
}
BENCHMARK(BM_ContfracExpand);

void BM_SampleAndVerdict(benchmark::State& state) {
  std::uint64_t idx = 0;
  for (auto _ : state) {
    auto rng = sample_stream(23, idx++);
    StochasticMatrix P = sample_chain(3, rng);
    auto v = nonresonance_verdict(P);
    benchmark::DoNotOptimize(v.status);
  }
}
BENCHMARK(BM_SampleAndVerdict);

}  // namespace

BENCHMARK_MAIN();
