#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "benford/bigfloat.hpp"

namespace benford {

// x = [a0; a1, a2, ...] with a_n >= 1 for n >= 1. precision_note counts the
// quotients that are certified: the expansion walks an interval around the
// input and stops as soon as the interval straddles a quotient boundary, so
// everything emitted is trustworthy.
struct ContinuedFraction {
  long long a0 = 0;
  std::vector<long long> partial_quotients;
  double source_value = 0;
  int precision_note = 0;
};

// Expansion of a double, treated as its exact value with +-1e-15 relative
// uncertainty. max_terms <= 60.
ContinuedFraction expand(double x, int max_terms);

// Exact interval expansion (lo <= hi); quotients are emitted while both
// endpoints agree. With lo == hi this is plain exact expansion of a
// rational, which terminates.
ContinuedFraction expand_interval(const BigRational& lo, const BigRational& hi,
                                  double source_hint, int max_terms);

struct Convergent {
  BigInt p;
  BigInt q;  // > 0
  int n = 0; // 0 is the integer part a0/1
};

std::vector<Convergent> convergents(const ContinuedFraction& cf);

struct ApproxGap {
  double gap = 0;    // |x - p/q|
  double bound = 0;  // 1/(a_{n+1} q^2)
  bool satisfied = false;
};

// The convergent error bound |x - p_n/q_n| < 1/(a_{n+1} q_n^2); the
// inequality is guaranteed from n >= 2 on. Comparison is exact (x as a
// rational), the reported doubles are rounded.
ApproxGap approximation_gap(double x, const Convergent& c,
                            long long next_quotient);

struct IrrationalityProfile {
  long long max_quotient = 0;
  int index_of_max = 0;  // 1-based among a1..am; large early quotients mean
                         // unusually good rational approximations
  double geometric_mean_quotient = 0;
};

IrrationalityProfile profile_of(const ContinuedFraction& cf);
IrrationalityProfile irrationality_profile(double x, int terms);

// Constants whose expansions are interesting enough to name on the command
// line. They are recomputed from closed forms in extended precision, so all
// requested quotients come out certified.
enum class NamedConstant {
  log10_0_3,                // log10(0.3)
  ex12_log_abs_lambda2,     // log10((1+sqrt(21))/20)
  ex13_log_abs_lambda2,     // log10(sqrt(13)/10)
  ex13_arg_lambda2_over_2pi,// atan(sqrt(3)/7)/(2*pi)
  golden_ratio,             // (1+sqrt(5))/2
};

const char* constant_name(NamedConstant c);
std::optional<NamedConstant> constant_by_name(std::string_view name);
std::vector<NamedConstant> all_named_constants();
ContinuedFraction expand_constant(NamedConstant c, int max_terms);

}  // namespace benford
