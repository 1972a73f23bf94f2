#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "benford/spectral.hpp"

namespace benford {

// Eigenvalues of the upper half-spectrum (Im >= 0, one per conjugate pair),
// leading eigenvalue excluded, grouped by equal modulus. members holds
// distinct values (numerical copies within 1e-8 collapse to one);
// reduced_args holds arg/(2*pi) with exact 0 and 1/2 removed, so it lives
// in (0, 1/2).
struct ModulusClass {
  double L0 = 0;
  std::vector<std::complex<double>> members;
  std::vector<double> reduced_args;
  bool gap_warning = false;  // another class sits within 10x the tolerance
};

std::vector<ModulusClass> modulus_classes(const EigenStructure& eig,
                                          double tol = 1e-9);

// First continued-fraction convergent p/q with q <= Qmax and
// |x - p/q| <= eps; exact arithmetic on the double's value, so near-misses
// like -0.5 + 1e-16 resolve to (-1, 2).
std::optional<std::pair<long long, long long>> detect_rational(
    double x, long long Qmax = 100, double eps = 1e-10);

// Nonzero integer vector q, |q_j| <= Qmax, with |sum q_j x_j| <= eps.
// Exhaustive over the bounds (meet-in-the-middle above 4 entries), so a
// "none" answer is a completeness statement at (Qmax, eps). The returned
// vector is gcd-reduced with its first nonzero coefficient negative, and
// selection is deterministic: smallest max|q_j|, then lexicographic.
// 2 <= xs.size() <= 6 (DimensionTooLarge above).
std::optional<std::vector<long long>> integer_relation(
    const std::vector<double>& xs, long long Qmax = 100, double eps = 1e-10);

struct ResonanceCertificate {
  enum class Kind {
    relation,          // integer relation among {1, log10 L0} + reduced args
    real_pair,         // two real members share a modulus class
    rational_log,      // log10 L0 is rational at (Qmax, eps)
    singular,          // an eigenvalue is (numerically) zero
    search_exhausted,  // no witness found within the bounds
  };
  Kind kind = Kind::search_exhausted;
  // Search bounds are always recorded; a "nonresonant" answer means
  // "no witness within (Qmax, eps)".
  long long Qmax = 0;
  double eps = 0;

  double class_L0 = 0;                    // class that triggered, if any
  std::vector<long long> relation;        // kind == relation
  std::vector<double> relation_xs;        // the vector searched
  double residual = 0;                    // |sum q_j x_j|
  std::complex<double> pair_a, pair_b;    // kind == real_pair
  long long p = 0, q = 0;                 // kind == rational_log
  double rational_err = 0;
  std::complex<double> singular_eigenvalue;  // kind == singular
};

struct ResonanceVerdict {
  enum class Status { nonresonant, resonant, undecided };
  Status status = Status::undecided;
  ResonanceCertificate certificate;
};

// One class's check, exposed so tests can also sweep subsets: real-pair
// count, rational log10 L0, then the bounded relation search over
// {1, log10 L0} + reduced args. exhaustive=false when the class has more
// args than the relation search supports.
struct ClassCheck {
  std::optional<ResonanceCertificate> witness;
  bool exhaustive = true;
};
ClassCheck check_class(const ModulusClass& cls, long long Qmax, double eps);

// Full decision: resonant iff some class yields a witness, with a
// machine-checkable certificate either way. Also resonant when any
// eigenvalue modulus is <= 1e-12 (the matrix must be invertible).
// Requires an aperiodic unichain (NotIrreducible/NotAperiodic propagate).
ResonanceVerdict nonresonance_verdict(const StochasticMatrix& P,
                                      long long Qmax = 100, double eps = 1e-10);
ResonanceVerdict nonresonance_verdict(const StochasticMatrix& P,
                                      const EigenStructure& eig,
                                      long long Qmax = 100, double eps = 1e-10);

}  // namespace benford
