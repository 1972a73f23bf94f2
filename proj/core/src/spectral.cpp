#include "benford/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace benford {

namespace {

// Argument normalized into (-pi, pi]; negative reals get +pi, and the
// -0.0 imaginary part of a conjugate-pair partner does not flip the sign.
double arg_pos(const std::complex<double>& z) {
  double a = std::atan2(std::imag(z), std::real(z));
  if (a <= -M_PI) a = M_PI;
  return a;
}

}  // namespace

EigenStructure eigen_decompose(const StochasticMatrix& P) {
  const int d = P.d();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(P.entries());
  if (solver.info() != Eigen::Success)
    throw ConvergenceFailure("eigenvalue iteration did not converge");

  Eigen::VectorXcd vals = solver.eigenvalues();
  Eigen::MatrixXcd vecs = solver.eigenvectors();

  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double ma = std::abs(vals(a)), mb = std::abs(vals(b));
    if (ma != mb) return ma > mb;
    return arg_pos(vals(a)) > arg_pos(vals(b));
  });

  EigenStructure e;
  e.eigenvalues.resize(d);
  e.right_vectors.resize(d, d);
  e.residuals.resize(d);
  e.simple.resize(d);
  const double pnorm = P.entries().norm();
  for (int k = 0; k < d; ++k) {
    e.eigenvalues(k) = vals(order[k]);
    e.right_vectors.col(k) = vecs.col(order[k]);
    const Eigen::VectorXcd v = e.right_vectors.col(k);
    e.residuals(k) =
        (P.entries() * v - e.eigenvalues(k) * v).norm() / v.norm();
    if (e.residuals(k) > 1e-10 * pnorm)
      throw ConvergenceFailure("eigenpair residual " +
                               std::to_string(e.residuals(k)));
  }
  for (int k = 0; k < d; ++k) {
    double gap = std::numeric_limits<double>::infinity();
    for (int m = 0; m < d; ++m)
      if (m != k) gap = std::min(gap, std::abs(e.eigenvalues(k) - e.eigenvalues(m)));
    e.simple[k] = gap > 1e-8;
  }
  return e;
}

SpectralDecomposition spectral_projectors(const StochasticMatrix& P,
                                          const EigenStructure& eig) {
  const int d = P.d();
  if (!eig.all_simple())
    throw MultipleEigenvalue("spectrum has a multiple eigenvalue");
  // P = V diag(lambda) V^-1, so B_l = v_l * (row l of V^-1): this already
  // carries the u^T v normalization.
  Eigen::MatrixXcd vinv = eig.right_vectors.colPivHouseholderQr().solve(
      Eigen::MatrixXcd::Identity(d, d));
  SpectralDecomposition dec;
  dec.eigen = eig;
  dec.projectors.reserve(d);
  for (int l = 0; l < d; ++l)
    dec.projectors.push_back(eig.right_vectors.col(l) * vinv.row(l));
  return dec;
}

namespace {

using cd = std::complex<double>;

// Degree of the shared-root form at size d: 2^d - 2 (verified by exact
// finite differencing; the naive count overestimates because top-degree
// monomials cancel).
long long q_degree(int d) { return (1LL << d) - 2; }

cd q_pair(const std::vector<cd>& a, const std::vector<cd>& b) {
  const int d = static_cast<int>(a.size());
  if (d == 2) return a[0] * b[0] - a[1] - b[0] * b[0];
  // Eliminate the leading coefficient difference, drop one degree, recurse:
  // rho is the new leading coefficient; when it vanishes the polynomials
  // already share their leading behavior and the form is 0 by definition.
  const cd diff = a[0] - b[0];
  const cd rho = a[1] - b[1] - diff * b[0];
  if (std::abs(rho) < 1e-100) return cd(0, 0);
  std::vector<cd> c(d - 2);
  for (int k = 0; k + 3 < d; ++k) c[k] = a[k + 2] - b[k + 2] - diff * b[k + 1];
  c[d - 3] = a[d - 1] - diff * b[d - 2];
  for (cd& x : c) x /= rho;
  std::vector<cd> bb(b.begin(), b.end());
  const cd inner = q_pair(bb, c);
  return std::pow(rho, static_cast<double>(1 + q_degree(d - 1))) * inner;
}

}  // namespace

std::complex<double> shared_root_indicator(const std::vector<cd>& a,
                                           const std::vector<cd>& b) {
  if (a.size() < 2) throw UnsupportedDegree("degree must be at least 2");
  if (a.size() > 6) throw UnsupportedDegree("degree above 6 not supported");
  if (b.size() + 1 != a.size())
    throw Error("second polynomial must have degree one less");
  return q_pair(a, b);
}

std::complex<double> multiple_root_indicator(const std::vector<cd>& a) {
  const int d = static_cast<int>(a.size());
  if (d < 2) throw UnsupportedDegree("degree must be at least 2");
  if (d > 6) throw UnsupportedDegree("degree above 6 not supported");
  // Pair with the scaled derivative p'(z)/d, whose non-leading coefficients
  // are ((d-k)/d) a_k: a common root with p' is a multiple root of p.
  std::vector<cd> b(d - 1);
  for (int k = 0; k < d - 1; ++k)
    b[k] = a[k] * (static_cast<double>(d - 1 - k) / d);
  return q_pair(a, b);
}

std::vector<cd> characteristic_coefficients(const StochasticMatrix& P) {
  // Faddeev-LeVerrier: exact in rational arithmetic, accurate enough in
  // double for d <= 16 unit-scale matrices.
  const int d = P.d();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(d, d);
  std::vector<cd> a(d);
  double c = 1.0;
  for (int k = 1; k <= d; ++k) {
    M = P.entries() * M + c * Eigen::MatrixXd::Identity(d, d);
    c = -(P.entries() * M).trace() / k;
    a[k - 1] = cd(c, 0);
  }
  return a;
}

}  // namespace benford
