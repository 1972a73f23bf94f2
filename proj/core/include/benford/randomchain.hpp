#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "benford/chains.hpp"
#include "benford/resonance.hpp"

namespace benford {

// Stream derivation: sample (or worker) idx draws from an mt19937_64 seeded
// with splitmix64_fin(seed + GOLDEN * (idx + 1)), where splitmix64_fin is
// the standard splitmix64 finalizer and GOLDEN = 0x9E3779B97F4A7C15. Every
// sample owns its stream, so partitioning a run across workers reproduces
// the single-worker records exactly. Test vectors live in the README and in
// the test suite.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t idx);
std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t idx);

// Uniform on the open simplex: d iid standard exponentials normalized by
// their sum. Exponentials use u = ((x >> 11) + 1) * 2^-53 in (0,1],
// e = -ln u.
std::vector<double> sample_simplex_row(int d, std::mt19937_64& rng);

// d independent simplex rows.
StochasticMatrix sample_chain(int d, std::mt19937_64& rng);

// The dependent-row family P = (1/40) [[X+4, X, 36-2X], [Y, Y+4, 36-2Y],
// [Z+2, Z+2, 36-2Z]] with X, Y, Z iid uniform on [0,1): continuous entries,
// yet one eigenvalue is exactly 0.1 for every draw, so the resonance test
// flags every sample. Uniforms use u = (x >> 11) * 2^-53 in [0,1).
StochasticMatrix counterexample_chain(std::mt19937_64& rng);

struct SampleRecord {
  long long index = 0;
  bool gate_ok = false;  // irreducible/aperiodic (holds a.s. for continuous rows)
  ResonanceVerdict::Status status = ResonanceVerdict::Status::undecided;
  bool simple_spectrum = false;
  // chi^2 per component, column-major, on the first N terms of (P^n - P*).
  // Only filled when the spectrum is simple; non-simple samples are recorded
  // but excluded from the chi^2 aggregate (chi2_evaluated = false).
  bool chi2_evaluated = false;
  std::vector<double> chi2;
  bool all_pass = false;  // every component chi^2 <= the alpha=0.01 critical
};

struct ChainSampleReport {
  int d = 0;
  long long count = 0;
  std::uint64_t seed = 0;
  long long N = 0;
  long long Qmax = 0;
  double eps = 0;
  std::vector<SampleRecord> samples;
  double fraction_nonresonant = 0;   // over all samples
  double fraction_components_pass = 0;  // over chi2-evaluated samples
  long long evaluated_count = 0;
};

// Monte Carlo sweep: sample chains, run the resonance decision, tally
// per-component first-digit chi^2 at N terms. d <= 6, count <= 1e4, N <= 1e5.
// Deterministic for a fixed seed; BENFORD_CHAIN_THREADS caps parallelism
// without changing any byte of the result.
ChainSampleReport random_chain_experiment(int d, long long count, long long N,
                                          std::uint64_t seed,
                                          long long Qmax = 100,
                                          double eps = 1e-10);

// State path from the chain (0-based states, inverse-CDF per row, start at
// state 0, one stream per seed).
std::vector<int> simulate_path(const StochasticMatrix& P, long long length,
                               std::uint64_t seed);

}  // namespace benford
