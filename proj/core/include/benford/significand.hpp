#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "benford/errors.hpp"

namespace benford {

// Critical values of chi-squared with 8 degrees of freedom, hard-coded so
// reports carry no special-function dependency.
inline constexpr double kChi2Crit05 = 15.507;
inline constexpr double kChi2Crit01 = 20.090;

// Fractional part with the [0,1) convention: frac1(-0.3) = 0.7.
double frac1(double x);

// Unique s in [1,10) with |x| = 10^k * s. Throws ZeroInput for 0 or
// non-finite x. Idempotent: values already in [1,10) come back unchanged.
double significand(double x);

// 10^(L mod 1): the underflow-free path, L = log10|x| of any magnitude.
double significand_from_log(double L);

// n-th significant digit; first digit in {1..9} for x != 0, later digits in
// {0..9}, all digits of 0 are 0. A 1e-9 relative guard absorbs
// decimal-boundary roundoff from log-domain values (2.9999999999 -> 3).
int nth_digit(double x, int n);

// First digit straight from a fractional log, same 1e-9 guard. f in [0,1).
int first_digit_from_frac(double f);

double benford_pmf_first(int d1);
// log10(1 + 1/(d1 d2 ... dn)) over the n-digit block; d1 in {1..9}
// (LeadingZero otherwise), later digits in {0..9}.
double benford_pmf_joint(const std::vector<int>& digits);

struct DigitFrequencyTable {
  std::array<long long, 9> counts{};  // digits 1..9
  long long total = 0;

  double frequency(int d1) const {
    return static_cast<double>(counts[d1 - 1]) / static_cast<double>(total);
  }
  void add(int d1) {
    counts[d1 - 1]++;
    total++;
  }
};

DigitFrequencyTable tally_first_digits(const std::vector<int>& first_digits);
DigitFrequencyTable tally_from_logs(const std::vector<double>& log10_values);

struct BenfordGofResult {
  double chi_squared = 0;
  int degrees_of_freedom = 8;
  double significand_discrepancy = 0;
};

// chi^2 against the first-digit law; EmptySample when total < 1. The
// two-argument form also fills the significand discrepancy from log values.
BenfordGofResult gof(const DigitFrequencyTable& table);
BenfordGofResult gof(const DigitFrequencyTable& table,
                     const std::vector<double>& log10_values);

// sup_t |F_n(t) - t| over the fractional parts of the given logs: the
// Kolmogorov distance between the empirical significand distribution and
// the logarithmic law. EmptySample on empty input.
double discrepancy(const std::vector<double>& log10_values);

enum class ReferenceDistribution { benford, uniform };

// E[1/Y] for Y on [1,10): 0.9/ln10 under the logarithmic density,
// ln10/9 under the uniform one. The gap is the classic "relative roundoff
// error is underestimated by about a third when significands are assumed
// uniform" effect.
double expected_reciprocal_significand(ReferenceDistribution dist);

}  // namespace benford
