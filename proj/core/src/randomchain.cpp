#include "benford/randomchain.hpp"

#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "benford/sequences.hpp"
#include "benford/significand.hpp"
#include "benford/spectral.hpp"

namespace benford {

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t idx) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (idx + 1);
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t idx) {
  return std::mt19937_64(stream_seed(seed, idx));
}

namespace {

double unit_open_closed(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1p-53;  // (0, 1]
}

double unit_half_open(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53;  // [0, 1)
}

int threads_from_env(long long count) {
  long long t = 0;
  if (const char* env = std::getenv("BENFORD_CHAIN_THREADS")) {
    t = std::atoll(env);
  }
  if (t < 1) {
    unsigned hw = std::thread::hardware_concurrency();
    t = hw ? static_cast<long long>(hw) : 1;
  }
  t = std::min<long long>(t, 64);
  t = std::min<long long>(t, count);
  return static_cast<int>(std::max<long long>(t, 1));
}

}  // namespace

std::vector<double> sample_simplex_row(int d, std::mt19937_64& rng) {
  if (d < 2) throw std::invalid_argument("need at least two states");
  std::vector<double> row(static_cast<size_t>(d));
  double sum = 0;
  for (auto& v : row) {
    v = -std::log(unit_open_closed(rng));
    sum += v;
  }
  for (auto& v : row) v /= sum;
  return row;
}

StochasticMatrix sample_chain(int d, std::mt19937_64& rng) {
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i) {
    auto row = sample_simplex_row(d, rng);
    for (int j = 0; j < d; ++j) m(i, j) = row[static_cast<size_t>(j)];
  }
  return validate_stochastic(m);
}

StochasticMatrix counterexample_chain(std::mt19937_64& rng) {
  const double X = unit_half_open(rng);
  const double Y = unit_half_open(rng);
  const double Z = unit_half_open(rng);
  Eigen::MatrixXd m(3, 3);
  m << (X + 4) / 40, X / 40, (36 - 2 * X) / 40,  //
      Y / 40, (Y + 4) / 40, (36 - 2 * Y) / 40,   //
      (Z + 2) / 40, (Z + 2) / 40, (36 - 2 * Z) / 40;
  return validate_stochastic(m);
}

ChainSampleReport random_chain_experiment(int d, long long count, long long N,
                                          std::uint64_t seed, long long Qmax,
                                          double eps) {
  if (d < 2 || d > 6) throw std::invalid_argument("d must be in 2..6");
  if (count < 1 || count > 10000)
    throw std::invalid_argument("count must be in 1..1e4");
  if (N < 1 || N > 100000) throw std::invalid_argument("N must be in 1..1e5");

  ChainSampleReport rep;
  rep.d = d;
  rep.count = count;
  rep.seed = seed;
  rep.N = N;
  rep.Qmax = Qmax;
  rep.eps = eps;
  rep.samples.resize(static_cast<size_t>(count));

  const int T = threads_from_env(count);
  std::exception_ptr first_error;
  std::mutex err_mu;

  auto work = [&](int w) {
    for (long long idx = w; idx < count; idx += T) {
      try {
        SampleRecord& rec = rep.samples[static_cast<size_t>(idx)];
        rec.index = idx;
        std::mt19937_64 rng =
            sample_stream(seed, static_cast<std::uint64_t>(idx));
        StochasticMatrix P = sample_chain(d, rng);
        ChainClassification cls = classify(P);
        rec.gate_ok = cls.unichain() && cls.aperiodic();
        if (!rec.gate_ok) continue;  // measure-zero; recorded, not analyzed
        EigenStructure eig = eigen_decompose(P);
        rec.status = nonresonance_verdict(P, eig, Qmax, eps).status;
        rec.simple_spectrum = eig.all_simple();
        if (!rec.simple_spectrum) continue;  // excluded from the chi2 pool
        SpectralDecomposition dec = spectral_projectors(P, eig);
        rec.chi2.reserve(static_cast<size_t>(d) * d);
        bool all_pass = true;
        for (int j = 0; j < d; ++j)
          for (int i = 0; i < d; ++i) {
            DigitFrequencyTable t = tally_component_first_digits(
                dec, i, j, SeriesKind::pn_minus_pstar, N);
            double chi2 = t.total > 0 ? gof(t).chi_squared : 0.0;
            rec.chi2.push_back(chi2);
            all_pass = all_pass && chi2 <= kChi2Crit01;
          }
        rec.all_pass = all_pass;
        rec.chi2_evaluated = true;
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (T == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(T));
    for (int w = 0; w < T; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  long long nonres = 0, evaluated = 0, pass = 0;
  for (const auto& r : rep.samples) {
    if (r.status == ResonanceVerdict::Status::nonresonant) ++nonres;
    if (r.chi2_evaluated) {
      ++evaluated;
      if (r.all_pass) ++pass;
    }
  }
  rep.evaluated_count = evaluated;
  rep.fraction_nonresonant =
      static_cast<double>(nonres) / static_cast<double>(count);
  rep.fraction_components_pass =
      evaluated > 0 ? static_cast<double>(pass) / static_cast<double>(evaluated)
                    : 0.0;
  return rep;
}

std::vector<int> simulate_path(const StochasticMatrix& P, long long length,
                               std::uint64_t seed) {
  if (length < 0) throw std::invalid_argument("negative length");
  std::mt19937_64 rng = sample_stream(seed, 0);
  std::vector<int> path;
  path.reserve(static_cast<size_t>(length));
  int s = 0;
  const int d = P.d();
  for (long long t = 0; t < length; ++t) {
    path.push_back(s);
    double u = unit_half_open(rng);
    double acc = 0;
    int next = d - 1;
    for (int j = 0; j < d; ++j) {
      acc += P(s, j);
      if (u < acc) {
        next = j;
        break;
      }
    }
    s = next;
  }
  return path;
}

}  // namespace benford
