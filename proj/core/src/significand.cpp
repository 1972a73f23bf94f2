#include "benford/significand.hpp"

#include <algorithm>
#include <cmath>

namespace benford {

double frac1(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f = 0.0;  // rounding of x just below an integer
  if (f < 0.0) f = 0.0;
  return f;
}

double significand(double x) {
  if (x == 0.0) throw ZeroInput("significand of zero is undefined");
  if (!std::isfinite(x)) throw ZeroInput("significand of non-finite value");
  const double ax = std::abs(x);
  if (ax >= 1.0 && ax < 10.0) return ax;  // exact idempotence
  double s = std::pow(10.0, frac1(std::log10(ax)));
  if (s >= 10.0) s /= 10.0;
  if (s < 1.0) s *= 10.0;
  return s;
}

double significand_from_log(double L) {
  if (!std::isfinite(L)) throw ZeroInput("non-finite log input");
  double s = std::pow(10.0, frac1(L));
  if (s >= 10.0) s /= 10.0;
  if (s < 1.0) s *= 10.0;
  return s;
}

namespace {

constexpr double kDigitGuard = 1e-9;  // relative, absorbs log-path roundoff

}  // namespace

int nth_digit(double x, int n) {
  if (n < 1) throw Error("digit index must be positive");
  if (x == 0.0) return 0;
  double s = significand(x) * (1.0 + kDigitGuard);
  if (s >= 10.0) s /= 10.0;  // guard pushed 9.99... over the decade edge
  if (n == 1) return static_cast<int>(s);
  // Peel digits one at a time; no powers, so any n is safe (digits beyond
  // double precision are just noise, as documented).
  double v = s;
  for (int k = 1; k < n; ++k) v = (v - std::floor(v)) * 10.0;
  int digit = static_cast<int>(v);
  if (digit > 9) digit = 9;
  return digit;
}

int first_digit_from_frac(double f) {
  static const double bounds[9] = {
      0.0,
      0.3010299956639812,   // log10 2
      0.47712125471966244,  // log10 3
      0.6020599913279624,   // log10 4
      0.6989700043360189,   // log10 5
      0.7781512503836436,   // log10 6
      0.8450980400142568,   // log10 7
      0.9030899869919435,   // log10 8
      0.9542425094393249,   // log10 9
  };
  // Same 1e-9 relative guard as nth_digit, expressed on the log scale.
  double g = f + 4.3429448190325176e-10;
  if (g >= 1.0) g -= 1.0;
  int d = static_cast<int>(std::upper_bound(bounds, bounds + 9, g) - bounds);
  return d;  // in {1..9}
}

double benford_pmf_first(int d1) {
  if (d1 < 1 || d1 > 9) throw Error("first digit must be 1..9");
  return std::log1p(1.0 / d1) / std::log(10.0);
}

double benford_pmf_joint(const std::vector<int>& digits) {
  if (digits.empty()) throw Error("need at least one digit");
  if (digits[0] < 1 || digits[0] > 9)
    throw LeadingZero("leading digit must be 1..9");
  double m = 0;
  for (size_t k = 0; k < digits.size(); ++k) {
    if (digits[k] < 0 || digits[k] > 9) throw Error("digit out of range");
    m = m * 10.0 + digits[k];
  }
  return std::log1p(1.0 / m) / std::log(10.0);
}

DigitFrequencyTable tally_first_digits(const std::vector<int>& first_digits) {
  DigitFrequencyTable t;
  for (int d : first_digits) {
    if (d < 1 || d > 9) throw Error("first digit out of range");
    t.add(d);
  }
  return t;
}

DigitFrequencyTable tally_from_logs(const std::vector<double>& log10_values) {
  DigitFrequencyTable t;
  for (double L : log10_values) t.add(first_digit_from_frac(frac1(L)));
  return t;
}

BenfordGofResult gof(const DigitFrequencyTable& table) {
  if (table.total < 1) throw EmptySample("empty digit table");
  BenfordGofResult r;
  const double T = static_cast<double>(table.total);
  for (int d = 1; d <= 9; ++d) {
    const double expected = T * benford_pmf_first(d);
    const double diff = static_cast<double>(table.counts[d - 1]) - expected;
    r.chi_squared += diff * diff / expected;
  }
  return r;
}

BenfordGofResult gof(const DigitFrequencyTable& table,
                     const std::vector<double>& log10_values) {
  BenfordGofResult r = gof(table);
  r.significand_discrepancy = discrepancy(log10_values);
  return r;
}

double discrepancy(const std::vector<double>& log10_values) {
  if (log10_values.empty()) throw EmptySample("no sample points");
  std::vector<double> u;
  u.reserve(log10_values.size());
  for (double L : log10_values) u.push_back(frac1(L));
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double dmax = 0;
  for (size_t k = 0; k < u.size(); ++k) {
    const double hi = (static_cast<double>(k) + 1.0) / n - u[k];
    const double lo = u[k] - static_cast<double>(k) / n;
    dmax = std::max(dmax, std::max(hi, lo));
  }
  return dmax;
}

double expected_reciprocal_significand(ReferenceDistribution dist) {
  switch (dist) {
    case ReferenceDistribution::benford:
      return 0.9 / std::log(10.0);
    case ReferenceDistribution::uniform:
      return std::log(10.0) / 9.0;
  }
  throw Error("unknown distribution");
}

}  // namespace benford
