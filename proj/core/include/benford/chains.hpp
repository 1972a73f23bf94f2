#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "benford/bigfloat.hpp"
#include "benford/errors.hpp"

namespace benford {

// Validated row-stochastic matrix. Construction goes through
// validate_stochastic; rows are renormalized to exact sum 1 internally
// (text-format inputs carry decimal roundoff, accepted up to 1e-9 per row).
class StochasticMatrix {
 public:
  int d() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& entries() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  friend StochasticMatrix validate_stochastic(const Eigen::MatrixXd& raw);

 private:
  explicit StochasticMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {}
  Eigen::MatrixXd m_;
};

// Errors: NegativeEntry, RowSumViolation (row off by > 1e-9), DimensionTooSmall.
StochasticMatrix validate_stochastic(const Eigen::MatrixXd& raw);

struct ChainClassification {
  bool irreducible = false;
  // Max period over recurrent classes; 1 = aperiodic. States with no return
  // path contribute nothing.
  int period = 1;
  std::vector<std::vector<int>> strongly_connected_components;
  // Indices into strongly_connected_components of the closed (recurrent)
  // classes. Exactly one closed class = "unichain"; those are analyzable
  // even when transient states make the matrix reducible in the strict sense.
  std::vector<int> recurrent_classes;

  bool unichain() const { return recurrent_classes.size() == 1; }
  bool aperiodic() const { return period == 1; }
};

ChainClassification classify(const StochasticMatrix& P);

// Throws NotIrreducible (≥ 2 closed classes) or NotAperiodic. Single closed
// class plus transient states passes: the limit matrix still exists, with
// zero stationary mass on transients.
void require_unichain_aperiodic(const StochasticMatrix& P);

struct StationaryDistribution {
  Eigen::VectorXd pi;
};

StationaryDistribution stationary_distribution(const StochasticMatrix& P);
Eigen::MatrixXd limiting_matrix(const StochasticMatrix& P);

// P^n by repeated squaring in software extended precision; test oracle for
// the spectral and log-domain paths. n ≤ 500 (NOverflow), precision_bits ≥ 128.
BigMatrix matrix_power_oracle(const StochasticMatrix& P, int n,
                              int precision_bits);

// Matrix text formats: CSV (one row per line) and JSON
// {"d": int, "rows": [[...]]}. Parsers return the raw matrix; validation is
// a separate step. ParseError on malformed input.
Eigen::MatrixXd parse_matrix_csv(const std::string& text);
Eigen::MatrixXd parse_matrix_json(const std::string& text);
Eigen::MatrixXd parse_matrix_file(const std::string& path);
std::string matrix_csv(const Eigen::MatrixXd& m);
std::string matrix_json(const Eigen::MatrixXd& m);

}  // namespace benford
