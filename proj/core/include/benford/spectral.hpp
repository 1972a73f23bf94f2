#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "benford/chains.hpp"

namespace benford {

// Eigenvalues sorted by non-increasing modulus, ties by non-increasing
// argument in (-pi, pi]. For an aperiodic unichain the leading eigenvalue
// is 1 and strictly dominates the rest.
struct EigenStructure {
  Eigen::VectorXcd eigenvalues;
  std::vector<bool> simple;    // min gap to any other eigenvalue > 1e-8
  Eigen::VectorXd residuals;   // backward error ||Pv - lambda v|| per pair
  Eigen::MatrixXcd right_vectors;  // columns aligned with eigenvalues

  bool all_simple() const {
    for (bool s : simple)
      if (!s) return false;
    return true;
  }
};

EigenStructure eigen_decompose(const StochasticMatrix& P);

// Rank-one projectors B_l = v_l u_l^T / (u_l^T v_l): P^n = sum_l lambda_l^n B_l,
// so P^n - P* = sum_{l>=2} lambda_l^n B_l and B_1 = P*.
struct SpectralDecomposition {
  EigenStructure eigen;
  std::vector<Eigen::MatrixXcd> projectors;
};

// Throws MultipleEigenvalue when any eigenvalue fails the 1e-8 gap; callers
// fall back to the extended-precision series path.
SpectralDecomposition spectral_projectors(const StochasticMatrix& P,
                                          const EigenStructure& eig);

// Resultant-style indicator: zero (|.| <= 1e-10 at unit coefficient scale)
// iff the monic polynomial z^d + a1 z^{d-1} + ... + ad has a multiple root.
// a holds (a1..ad), 2 <= d <= 6 (UnsupportedDegree above).
std::complex<double> multiple_root_indicator(
    const std::vector<std::complex<double>>& a);

// The underlying two-polynomial form: zero iff the monic polynomials with
// non-leading coefficients a (degree d) and b (degree d-1) share a root.
std::complex<double> shared_root_indicator(
    const std::vector<std::complex<double>>& a,
    const std::vector<std::complex<double>>& b);

// Non-leading characteristic polynomial coefficients (a1..ad) of P, for
// feeding multiple_root_indicator.
std::vector<std::complex<double>> characteristic_coefficients(
    const StochasticMatrix& P);

}  // namespace benford
