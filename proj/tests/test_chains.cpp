#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "benford/chains.hpp"
#include "benford/errors.hpp"
#include "test_util.hpp"

using namespace benford;

TEST_CASE("validation accepts a clean row-stochastic matrix") {
  Eigen::MatrixXd m(2, 2);
  m << 0.7, 0.3, 0.4, 0.6;
  StochasticMatrix P = validate_stochastic(m);
  CHECK(P.d() == 2);
  CHECK(P(0, 0) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("validation rejects negatives, bad row sums, tiny dimension") {
  Eigen::MatrixXd neg(2, 2);
  neg << -0.1, 1.1, 0.5, 0.5;
  CHECK_THROWS_AS(validate_stochastic(neg), NegativeEntry);

  Eigen::MatrixXd off(2, 2);
  off << 0.7, 0.31, 0.4, 0.6;  // row 0 sums to 1.01
  CHECK_THROWS_AS(validate_stochastic(off), RowSumViolation);

  Eigen::MatrixXd one(1, 1);
  one << 1.0;
  CHECK_THROWS_AS(validate_stochastic(one), DimensionTooSmall);
}

TEST_CASE("rows are renormalized to machine-exact sums") {
  Eigen::MatrixXd m(2, 2);
  // off by 5e-10 per row: inside tolerance, renormalized away
  m << 0.7 + 5e-10, 0.3, 0.4, 0.6 - 5e-10;
  StochasticMatrix P = validate_stochastic(m);
  for (int i = 0; i < 2; ++i) {
    double s = P(i, 0) + P(i, 1);
    CHECK(std::abs(s - 1.0) <= 1e-15);
  }
}

TEST_CASE("classification of the worked examples") {
  auto c12 = classify(load_chain("ex12.csv"));
  CHECK(c12.irreducible);
  CHECK(c12.period == 1);
  CHECK(c12.unichain());
  CHECK(c12.aperiodic());
  CHECK(c12.strongly_connected_components.size() == 1);

  auto cp2 = classify(load_chain("period2.csv"));
  CHECK(cp2.irreducible);
  CHECK(cp2.period == 2);
  CHECK_FALSE(cp2.aperiodic());

  auto cc3 = classify(load_chain("cycle3.csv"));
  CHECK(cc3.period == 3);

  auto cid = classify(load_chain("identity2.csv"));
  CHECK_FALSE(cid.irreducible);
  CHECK(cid.recurrent_classes.size() == 2);
  CHECK_FALSE(cid.unichain());
}

TEST_CASE("transient states leave a usable unichain") {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 0.0, 0.5, 0.5;  // state 2 drains into absorbing state 1
  StochasticMatrix P = validate_stochastic(m);
  auto c = classify(P);
  CHECK_FALSE(c.irreducible);
  CHECK(c.unichain());
  CHECK(c.aperiodic());
  CHECK_NOTHROW(require_unichain_aperiodic(P));
}

TEST_CASE("ergodicity gate throws structured refusals") {
  CHECK_THROWS_AS(require_unichain_aperiodic(load_chain("identity2.csv")),
                  NotIrreducible);
  CHECK_THROWS_AS(require_unichain_aperiodic(load_chain("period2.csv")),
                  NotAperiodic);
  CHECK_THROWS_AS(require_unichain_aperiodic(load_chain("cycle3.csv")),
                  NotAperiodic);
}

TEST_CASE("stationary distribution closed forms") {
  auto pi1 = stationary_distribution(load_chain("ex2i.csv")).pi;
  CHECK(std::abs(pi1(0) - 4.0 / 7.0) <= 1e-12);
  CHECK(std::abs(pi1(1) - 3.0 / 7.0) <= 1e-12);

  auto pi2 = stationary_distribution(load_chain("ex3i.csv")).pi;
  CHECK(std::abs(pi2(0) - 1.0 / 9.0) <= 1e-12);
  CHECK(std::abs(pi2(1) - 8.0 / 9.0) <= 1e-12);

  auto P12 = load_chain("ex12.csv");
  auto pi3 = stationary_distribution(P12).pi;
  CHECK(std::abs(pi3.sum() - 1.0) <= 1e-12);
  // invariance under the chain
  Eigen::VectorXd back = P12.entries().transpose() * pi3;
  CHECK((back - pi3).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("stationary mass avoids transient states") {
  Eigen::MatrixXd m(3, 3);
  m << 1.0, 0.0, 0.0, 0.25, 0.5, 0.25, 0.25, 0.25, 0.5;
  auto pi = stationary_distribution(validate_stochastic(m)).pi;
  CHECK(std::abs(pi(0) - 1.0) <= 1e-12);
  CHECK(std::abs(pi(1)) <= 1e-12);
  CHECK(std::abs(pi(2)) <= 1e-12);
}

TEST_CASE("limiting matrix repeats the stationary row") {
  Eigen::MatrixXd L = limiting_matrix(load_chain("ex2i.csv"));
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(L(i, 0) - 4.0 / 7.0) <= 1e-12);
    CHECK(std::abs(L(i, 1) - 3.0 / 7.0) <= 1e-12);
  }
}

TEST_CASE("extended-precision power oracle") {
  auto P = load_chain("ex3i.csv");
  // closed form: P^n - P* = 0.1^n/9 * [[8,-8],[-1,1]]
  for (int n : {1, 3, 7, 20}) {
    BigMatrix M = matrix_power_oracle(P, n, 256);
    double expect = 1.0 / 9.0 + 8.0 / 9.0 * std::pow(0.1, n);
    CHECK(std::abs(static_cast<double>(M.at(0, 0)) - expect) <= 1e-15);
    double row = static_cast<double>(M.at(1, 0) + M.at(1, 1));
    CHECK(std::abs(row - 1.0) <= 1e-15);
  }
  CHECK_THROWS_AS(matrix_power_oracle(P, 501, 256), NOverflow);
}

TEST_CASE("matrix text formats round-trip") {
  auto P = load_chain("ex12.csv");
  Eigen::MatrixXd back = parse_matrix_csv(matrix_csv(P.entries()));
  CHECK((back - P.entries()).cwiseAbs().maxCoeff() == 0.0);
  Eigen::MatrixXd jback = parse_matrix_json(matrix_json(P.entries()));
  CHECK((jback - P.entries()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("json matrix file parses identically to csv") {
  auto a = load_chain("ex2i.csv");
  auto b = load_chain("ex2i.json");
  CHECK((a.entries() - b.entries()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("csv parser skips comments and rejects ragged rows") {
  Eigen::MatrixXd m = parse_matrix_csv("# comment\n0.5,0.5\n\n0.25,0.75\n");
  CHECK(m.rows() == 2);
  CHECK(m(1, 0) == 0.25);
  CHECK_THROWS_AS(parse_matrix_csv("0.5,0.5\n0.25\n"), ParseError);
  CHECK_THROWS_AS(parse_matrix_csv("0.5,abc\n0.1,0.9\n"), ParseError);
  CHECK_THROWS_AS(parse_matrix_json("{\"d\": 2}"), ParseError);
}
