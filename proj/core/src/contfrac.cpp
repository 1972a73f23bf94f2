#include "benford/contfrac.hpp"

#include <cmath>
#include <stdexcept>

namespace benford {

namespace {

BigInt rat_floor(const BigRational& y) {
  BigInt num = numerator(y), den = denominator(y);
  BigInt q = num / den;
  if (num < 0 && q * den != num) --q;
  return q;
}

const BigInt kQuotientCap = BigInt(1) << 62;

}  // namespace

ContinuedFraction expand_interval(const BigRational& lo, const BigRational& hi,
                                  double source_hint, int max_terms) {
  if (max_terms < 1 || max_terms > 60)
    throw std::invalid_argument("max_terms must be in 1..60");
  if (lo > hi) throw std::invalid_argument("inverted interval");

  ContinuedFraction cf;
  cf.source_value = source_hint;

  BigRational a = lo, b = hi;
  BigInt q0a = rat_floor(a), q0b = rat_floor(b);
  if (q0a != q0b) {
    // Interval straddles an integer: nothing is certain, report the middle.
    cf.a0 = static_cast<long long>(rat_floor((lo + hi) / 2));
    cf.precision_note = 0;
    return cf;
  }
  if (q0a <= -kQuotientCap || q0a >= kQuotientCap) {
    cf.precision_note = 0;
    return cf;
  }
  cf.a0 = static_cast<long long>(q0a);
  cf.precision_note = 1;

  BigInt q = q0a;
  while (static_cast<int>(cf.partial_quotients.size()) < max_terms) {
    BigRational fa = a - BigRational(q);
    BigRational fb = b - BigRational(q);
    if (fa == 0 && fb == 0) break;  // exact rational, fully expanded
    if (fa == 0 || fb == 0) break;  // endpoint on a boundary: next quotient
                                    // is unbounded within the interval
    BigRational na = 1 / fb;        // reciprocation swaps the endpoints
    BigRational nb = 1 / fa;
    a = na;
    b = nb;
    q = rat_floor(a);
    if (q != rat_floor(b)) break;  // quotient boundary inside the interval
    if (q >= kQuotientCap) break;
    cf.partial_quotients.push_back(static_cast<long long>(q));
    ++cf.precision_note;
  }
  return cf;
}

ContinuedFraction expand(double x, int max_terms) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite input");
  const double delta = std::max(std::abs(x), 1.0) * 1e-15;
  const BigRational v(x);
  const BigRational d(delta);
  return expand_interval(v - d, v + d, x, max_terms);
}

std::vector<Convergent> convergents(const ContinuedFraction& cf) {
  std::vector<Convergent> out;
  BigInt pm1 = 1, pm2 = 0, qm1 = 0, qm2 = 1;
  BigInt p = cf.a0 * pm1 + pm2;
  BigInt q = cf.a0 * qm1 + qm2;
  out.push_back({p, q, 0});
  pm2 = pm1;
  pm1 = p;
  qm2 = qm1;
  qm1 = q;
  int n = 1;
  for (long long al : cf.partial_quotients) {
    BigInt a(al);
    p = a * pm1 + pm2;
    q = a * qm1 + qm2;
    out.push_back({p, q, n++});
    pm2 = pm1;
    pm1 = p;
    qm2 = qm1;
    qm1 = q;
  }
  return out;
}

ApproxGap approximation_gap(double x, const Convergent& c,
                            long long next_quotient) {
  if (next_quotient < 1)
    throw std::invalid_argument("partial quotients are >= 1");
  if (c.q <= 0) throw std::invalid_argument("convergent denominator must be positive");
  const BigRational xv(x);
  BigRational gap = xv - BigRational(c.p, c.q);
  if (gap < 0) gap = -gap;
  const BigRational bound(BigInt(1), BigInt(next_quotient) * c.q * c.q);
  ApproxGap g;
  g.gap = gap.convert_to<double>();
  g.bound = bound.convert_to<double>();
  g.satisfied = gap < bound;
  return g;
}

IrrationalityProfile profile_of(const ContinuedFraction& cf) {
  IrrationalityProfile p;
  if (cf.partial_quotients.empty()) return p;
  double log_sum = 0;
  for (size_t i = 0; i < cf.partial_quotients.size(); ++i) {
    long long a = cf.partial_quotients[i];
    if (a > p.max_quotient) {
      p.max_quotient = a;
      p.index_of_max = static_cast<int>(i) + 1;
    }
    log_sum += std::log(static_cast<double>(a));
  }
  p.geometric_mean_quotient =
      std::exp(log_sum / static_cast<double>(cf.partial_quotients.size()));
  return p;
}

IrrationalityProfile irrationality_profile(double x, int terms) {
  return profile_of(expand(x, terms));
}

const char* constant_name(NamedConstant c) {
  switch (c) {
    case NamedConstant::log10_0_3:
      return "log10(0.3)";
    case NamedConstant::ex12_log_abs_lambda2:
      return "ex12.log_abs_lambda2";
    case NamedConstant::ex13_log_abs_lambda2:
      return "ex13.log_abs_lambda2";
    case NamedConstant::ex13_arg_lambda2_over_2pi:
      return "ex13.arg_lambda2_over_2pi";
    case NamedConstant::golden_ratio:
      return "golden_ratio";
  }
  return "?";
}

std::optional<NamedConstant> constant_by_name(std::string_view name) {
  for (NamedConstant c : all_named_constants())
    if (name == constant_name(c)) return c;
  return std::nullopt;
}

std::vector<NamedConstant> all_named_constants() {
  return {NamedConstant::log10_0_3, NamedConstant::ex12_log_abs_lambda2,
          NamedConstant::ex13_log_abs_lambda2,
          NamedConstant::ex13_arg_lambda2_over_2pi,
          NamedConstant::golden_ratio};
}

ContinuedFraction expand_constant(NamedConstant c, int max_terms) {
  // ~200 decimal digits; the certified band handed to the interval expansion
  // is 1e-150, far wider than the arithmetic error and far narrower than
  // anything 60 quotients can probe.
  PrecisionGuard guard(664);
  BigFloat v;
  switch (c) {
    case NamedConstant::log10_0_3:
      v = log10(BigFloat(3) / 10);
      break;
    case NamedConstant::ex12_log_abs_lambda2:
      v = log10((1 + sqrt(BigFloat(21))) / 20);
      break;
    case NamedConstant::ex13_log_abs_lambda2:
      v = log10(sqrt(BigFloat(13)) / 10);
      break;
    case NamedConstant::ex13_arg_lambda2_over_2pi: {
      BigFloat pi = 4 * atan(BigFloat(1));
      v = atan(sqrt(BigFloat(3)) / 7) / (2 * pi);
      break;
    }
    case NamedConstant::golden_ratio:
      v = (1 + sqrt(BigFloat(5))) / 2;
      break;
  }
  const BigRational exact = v.convert_to<BigRational>();
  const BigRational margin(BigInt(1), pow(BigInt(10), 150));
  return expand_interval(exact - margin, exact + margin,
                         v.convert_to<double>(), max_terms);
}

}  // namespace benford
