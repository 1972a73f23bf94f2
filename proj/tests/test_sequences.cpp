#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "benford/errors.hpp"
#include "benford/sequences.hpp"
#include "benford/significand.hpp"
#include "benford/spectral.hpp"
#include "test_util.hpp"

using namespace benford;

namespace {

DigitFrequencyTable tally_logs(const std::vector<double>& logs) {
  DigitFrequencyTable t;
  for (double lg : logs) t.add(first_digit_from_frac(frac1(lg)));
  return t;
}

void check_counts(const DigitFrequencyTable& t, const long long (&want)[9]) {
  for (int d = 1; d <= 9; ++d) {
    CAPTURE(d);
    CHECK(t.counts[d - 1] == want[d - 1]);
  }
}

}  // namespace

TEST_CASE("classic sequence logs: exact small values") {
  auto p2 = classic_sequence_logs(ClassicSequence::pow2, 4);
  REQUIRE(p2.size() == 4);
  for (int n = 1; n <= 4; ++n)
    CHECK(p2[n - 1] == doctest::Approx(n * std::log10(2.0)).epsilon(1e-15));

  auto fo = classic_sequence_logs(ClassicSequence::factorial, 5);
  CHECK(fo[0] == 0.0);                                        // 1!
  CHECK(fo[4] == doctest::Approx(std::log10(120.0)).epsilon(1e-14));  // 5!

  auto fb = classic_sequence_logs(ClassicSequence::fibonacci, 12);
  CHECK(fb[0] == 0.0);  // F_1 = 1
  CHECK(fb[1] == 0.0);  // F_2 = 1
  CHECK(fb[11] == doctest::Approx(std::log10(144.0)).epsilon(1e-13));
}

TEST_CASE("fibonacci stays exact across the closed-form handoff") {
  auto fb = classic_sequence_logs(ClassicSequence::fibonacci, 92);
  // F_90 and F_92 still fit in 64-bit integers
  CHECK(fb[89] ==
        doctest::Approx(std::log10(2880067194370816120.0)).epsilon(1e-12));
  CHECK(fb[91] ==
        doctest::Approx(std::log10(7540113804746346429.0)).epsilon(1e-12));
}

TEST_CASE("first-digit counts of the three classic sequences at 1000 terms") {
  const long long fact[9] = {293, 176, 124, 102, 69, 87, 51, 51, 47};
  const long long pow2[9] = {301, 176, 125, 97, 79, 69, 56, 52, 45};
  const long long fib[9] = {301, 177, 125, 96, 80, 67, 56, 53, 45};
  check_counts(tally_logs(classic_sequence_logs(ClassicSequence::factorial,
                                                1000)),
               fact);
  check_counts(tally_logs(classic_sequence_logs(ClassicSequence::pow2, 1000)),
               pow2);
  check_counts(tally_logs(classic_sequence_logs(ClassicSequence::fibonacci,
                                                1000)),
               fib);
}

TEST_CASE("scale and power invariance of the digit statistics") {
  // 2^n, 5*2^n and 2^-n all follow the law; chi^2 stays comparable
  const long N = 10000;
  std::vector<double> base, scaled, inverted;
  for (long n = 1; n <= N; ++n) {
    base.push_back(n * std::log10(2.0));
    scaled.push_back(std::log10(5.0) + n * std::log10(2.0));
    inverted.push_back(-n * std::log10(2.0));
  }
  double c1 = gof(tally_logs(base)).chi_squared;
  double c2 = gof(tally_logs(scaled)).chi_squared;
  double c3 = gof(tally_logs(inverted)).chi_squared;
  CHECK(c1 < kChi2Crit01);
  CHECK(c2 < kChi2Crit01);
  CHECK(c3 < kChi2Crit01);
  CHECK(c2 <= 2 * c1 + 1.0);
  CHECK(c3 <= 2 * c1 + 1.0);
}

TEST_CASE("guards on sequence length") {
  CHECK_THROWS_AS(classic_sequence_logs(ClassicSequence::pow2, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(classic_sequence_logs(ClassicSequence::pow2, 1000001),
                  std::invalid_argument);
}

TEST_CASE("component series of the 2x2 example") {
  auto P = load_chain("ex2i.csv");
  auto dec = spectral_projectors(P, eigen_decompose(P));
  auto s = component_log_series(dec, 0, 0, SeriesKind::pn_minus_pstar, 50);
  REQUIRE(s.entries.size() == 50);
  // (P^n - P*)^(1,1) = (3/7) 0.3^n
  for (int n = 1; n <= 50; ++n) {
    const LogEntry& e = s.entries[static_cast<size_t>(n - 1)];
    CHECK(e.n == n);
    CHECK_FALSE(e.is_zero);
    double expect = std::log10(3.0 / 7.0) + n * std::log10(0.3);
    CHECK(std::abs(e.log10_abs - expect) <= 1e-9);
    CHECK(e.frac_log10 >= 0.0);
    CHECK(e.frac_log10 < 1.0);
    CHECK(std::abs(e.frac_log10 - frac1(expect)) <= 1e-9);
  }

  auto d = component_log_series(dec, 0, 0, SeriesKind::successive_diff, 5);
  // (P^{n+1} - P^n)^(1,1) = (3/7)(0.3 - 1) 0.3^n
  double expect1 = std::log10(0.3 * (3.0 / 7.0) * 0.7);
  CHECK(std::abs(d.entries[0].log10_abs - expect1) <= 1e-9);
}

TEST_CASE("fractional parts stay accurate at the far end of a long series") {
  auto P = load_chain("ex2i.csv");
  auto dec = spectral_projectors(P, eigen_decompose(P));
  auto s = component_log_series(dec, 0, 0, SeriesKind::pn_minus_pstar,
                                1000000);
  const LogEntry& last = s.entries.back();
  // closed form via extended-precision arithmetic in double pieces:
  // frac(log10(3/7) + 10^6 log10 0.3) computed with compensated reduction
  long double acc = std::log10(0.3L);
  long double f = std::fmod(1000000.0L * acc, 1.0L) +
                  std::log10(3.0L / 7.0L);
  long double expect = f - std::floor(f);
  CHECK(std::abs(static_cast<double>(expect) - last.frac_log10) <= 1e-8);
}

TEST_CASE("alternating-zero component of the resonant example") {
  auto P = load_chain("ex6i.csv");
  auto dec = spectral_projectors(P, eigen_decompose(P));
  auto s = component_log_series(dec, 0, 0, SeriesKind::pn_minus_pstar, 40);
  // (P^n - P*)^(1,1) = 0.4 * 0.2^{n/2} for even n, 0 for odd n
  for (int n = 1; n <= 40; ++n) {
    const LogEntry& e = s.entries[static_cast<size_t>(n - 1)];
    if (n % 2 == 1) {
      CHECK(e.is_zero);
    } else {
      REQUIRE_FALSE(e.is_zero);
      double expect = std::log10(0.4) + (n / 2) * std::log10(0.2);
      CHECK(std::abs(e.log10_abs - expect) <= 1e-8);
    }
  }
}

TEST_CASE("exactly zero coefficients give all-zero series") {
  auto P = load_chain("ex2ii.csv");
  auto dec = spectral_projectors(P, eigen_decompose(P));
  // component (1,2): both non-unit projectors vanish there
  auto s = component_log_series(dec, 0, 1, SeriesKind::pn_minus_pstar, 100);
  for (const auto& e : s.entries) CHECK(e.is_zero);
}

TEST_CASE("digit tally agrees with the series it summarizes") {
  auto P = load_chain("ex12.csv");
  auto dec = spectral_projectors(P, eigen_decompose(P));
  auto s = component_log_series(dec, 1, 2, SeriesKind::pn_minus_pstar, 500);
  DigitFrequencyTable direct;
  for (const auto& e : s.entries)
    if (!e.is_zero) direct.add(first_digit_from_frac(e.frac_log10));
  auto t = tally_component_first_digits(dec, 1, 2,
                                        SeriesKind::pn_minus_pstar, 500);
  CHECK(t.total == direct.total);
  for (int d1 = 1; d1 <= 9; ++d1)
    CHECK(t.counts[d1 - 1] == direct.counts[d1 - 1]);
}

TEST_CASE("extended-precision path matches the spectral path") {
  auto P = load_chain("ex2i.csv");
  auto dec = spectral_projectors(P, eigen_decompose(P));
  for (SeriesKind k :
       {SeriesKind::pn_minus_pstar, SeriesKind::successive_diff}) {
    auto fast = component_log_series(dec, 1, 0, k, 100);
    auto slow = fallback_log_series(P, 1, 0, k, 100);
    REQUIRE(fast.entries.size() == slow.entries.size());
    for (size_t t = 0; t < fast.entries.size(); ++t) {
      CHECK(fast.entries[t].is_zero == slow.entries[t].is_zero);
      if (!fast.entries[t].is_zero)
        CHECK(std::abs(fast.entries[t].log10_abs -
                       slow.entries[t].log10_abs) <= 1e-10);
    }
  }
}

TEST_CASE("extended-precision path handles a defective matrix") {
  auto P = load_chain("defective3.csv");
  // (P^n)^(1,2) = n 2^-n exactly; the limit matrix vanishes there
  auto s = fallback_log_series(P, 0, 1, SeriesKind::pn_minus_pstar, 50);
  for (int n = 1; n <= 50; ++n) {
    const LogEntry& e = s.entries[static_cast<size_t>(n - 1)];
    REQUIRE_FALSE(e.is_zero);
    double expect = std::log10(static_cast<double>(n)) -
                    n * std::log10(2.0);
    CHECK(std::abs(e.log10_abs - expect) <= 1e-9);
  }
}

TEST_CASE("series engine refuses repeated spectra") {
  auto P = load_chain("ex5ii.csv");
  CHECK_THROWS_AS(spectral_projectors(P, eigen_decompose(P)),
                  MultipleEigenvalue);
  // and the extended-precision fallback handles the same matrix
  auto s = fallback_log_series(P, 0, 0, SeriesKind::pn_minus_pstar, 30);
  CHECK(s.entries.size() == 30);
}

TEST_CASE("fallback batch returns every component in row-major order") {
  auto P = load_chain("ex2i.csv");
  auto all = fallback_log_series_all(P, SeriesKind::pn_minus_pstar, 20);
  REQUIRE(all.size() == 4);
  CHECK(all[0].i == 0);
  CHECK(all[0].j == 0);
  CHECK(all[1].i == 0);
  CHECK(all[1].j == 1);
  CHECK(all[3].i == 1);
  CHECK(all[3].j == 1);
}

TEST_CASE("verdicts on the worked examples") {
  auto verdicts = [](const char* file, SeriesKind kind) {
    auto P = load_chain(file);
    auto eig = eigen_decompose(P);
    auto dec = spectral_projectors(P, eig);
    auto v = nonresonance_verdict(P, eig, 100, 1e-10);
    std::vector<ComponentVerdict> out;
    for (int j = 0; j < P.d(); ++j)
      for (int i = 0; i < P.d(); ++i)
        out.push_back(component_verdict(dec, v, i, j, kind));
    return out;
  };
  using V = ComponentVerdict;

  // nonresonant chain: everything predicted, except structural zeros
  auto v2ii = verdicts("ex2ii.csv", SeriesKind::pn_minus_pstar);
  CHECK(v2ii[3] == V::EventuallyZero);  // (1,2)
  CHECK(v2ii[5] == V::EventuallyZero);  // (3,2)
  for (size_t k : {0u, 1u, 2u, 4u, 6u, 7u, 8u})
    CHECK(v2ii[k] == V::BenfordPredicted);

  // rational-log chain: first column fails, the rest ride the smaller mode
  auto v3ii = verdicts("ex3ii.csv", SeriesKind::pn_minus_pstar);
  for (size_t k : {0u, 1u, 2u}) CHECK(v3ii[k] == V::NonBenfordRationalLog);
  for (size_t k : {3u, 4u, 5u, 6u, 7u, 8u})
    CHECK(v3ii[k] == V::BenfordPredicted);

  // alternating-zero components of the real-pair and rotation chains
  auto v6i = verdicts("ex6i.csv", SeriesKind::pn_minus_pstar);
  CHECK(v6i[0] == V::NonBenfordResonant);  // (1,1)
  auto v6iii = verdicts("ex6iii.csv", SeriesKind::pn_minus_pstar);
  CHECK(v6iii[4] == V::NonBenfordResonant);  // (2,2)

  // resonant chains whose digit behavior the verdict logic must not guess
  auto v15i = verdicts("ex15i.csv", SeriesKind::pn_minus_pstar);
  for (auto v : v15i) CHECK(v == V::Undetermined);
  auto v15ii = verdicts("ex15ii.csv", SeriesKind::pn_minus_pstar);
  // third column sees only the +0.3 eigenvalue: certified by the two-term
  // argument; the rest stay open
  CHECK(v15ii[6] == V::BenfordPredicted);
  CHECK(v15ii[7] == V::BenfordPredicted);
  CHECK(v15ii[8] == V::BenfordPredicted);
  for (size_t k : {0u, 1u, 2u, 3u, 4u, 5u})
    CHECK(v15ii[k] == V::Undetermined);
}

TEST_CASE("series guards") {
  auto P = load_chain("ex2i.csv");
  auto dec = spectral_projectors(P, eigen_decompose(P));
  CHECK_THROWS(component_log_series(dec, 0, 0,
                                    SeriesKind::pn_minus_pstar, 0));
  CHECK_THROWS(component_log_series(dec, 2, 0,
                                    SeriesKind::pn_minus_pstar, 10));
  CHECK_THROWS_AS(require_unichain_aperiodic(load_chain("period2.csv")),
                  NotAperiodic);
  CHECK_THROWS(fallback_log_series(load_chain("period2.csv"), 0, 0,
                                   SeriesKind::pn_minus_pstar, 10));
}
