#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "benford/errors.hpp"
#include "benford/resonance.hpp"
#include "benford/spectral.hpp"
#include "test_util.hpp"

using namespace benford;

namespace {
std::vector<ModulusClass> classes_of(const char* file) {
  auto P = load_chain(file);
  return modulus_classes(eigen_decompose(P));
}
ResonanceVerdict verdict_of(const char* file, long long Qmax = 100,
                            double eps = 1e-10) {
  auto P = load_chain(file);
  return nonresonance_verdict(P, Qmax, eps);
}
}  // namespace

TEST_CASE("modulus classes of a real simple spectrum") {
  auto cls = classes_of("ex12.csv");
  REQUIRE(cls.size() == 2);
  // sorted by decreasing modulus; both eigenvalues are real, so no
  // reduced argument survives the 0 / 1/2 stripping
  double big = (1.0 + std::sqrt(21.0)) / 20.0;
  double small = (std::sqrt(21.0) - 1.0) / 20.0;
  CHECK(cls[0].L0 == doctest::Approx(big).epsilon(1e-12));
  CHECK(cls[1].L0 == doctest::Approx(small).epsilon(1e-12));
  for (const auto& c : cls) {
    CHECK(c.members.size() == 1);
    CHECK(c.reduced_args.empty());
    CHECK_FALSE(c.gap_warning);
  }
  CHECK(cls[0].members[0].real() == doctest::Approx(-big).epsilon(1e-12));
  CHECK(cls[1].members[0].real() == doctest::Approx(small).epsilon(1e-12));
}

TEST_CASE("modulus class of a conjugate pair") {
  auto cls = classes_of("ex13.csv");
  REQUIRE(cls.size() == 1);
  // lambda = (7 +/- sqrt(3) i)/20: the pair contributes one member with one
  // reduced argument
  CHECK(cls[0].L0 == doctest::Approx(std::sqrt(13.0) / 10.0).epsilon(1e-12));
  REQUIRE(cls[0].members.size() == 1);
  CHECK(cls[0].members[0].imag() > 0);
  REQUIRE(cls[0].reduced_args.size() == 1);
  double want = std::atan2(std::sqrt(3.0) / 20.0, 7.0 / 20.0) /
                (2.0 * std::acos(-1.0));
  CHECK(cls[0].reduced_args[0] == doctest::Approx(want).epsilon(1e-10));
  CHECK(cls[0].reduced_args[0] > 0.0);
  CHECK(cls[0].reduced_args[0] < 0.5);
}

TEST_CASE("two conjugate pairs sharing one modulus") {
  auto cls = classes_of("ex6iv.csv");
  REQUIRE(cls.size() == 3);
  // descending: (sqrt5+1)/20, then the shared modulus 5^(1/4)/10 with both
  // conjugate pairs, then (sqrt5-1)/20
  CHECK(cls[0].L0 == doctest::Approx((std::sqrt(5.0) + 1) / 20).epsilon(1e-9));
  CHECK(cls[0].members.size() == 1);
  CHECK(cls[2].L0 == doctest::Approx((std::sqrt(5.0) - 1) / 20).epsilon(1e-9));
  CHECK(cls[2].members.size() == 1);
  CHECK(cls[1].L0 ==
        doctest::Approx(std::pow(5.0, 0.25) / 10.0).epsilon(1e-10));
  CHECK(cls[1].members.size() == 2);
  REQUIRE(cls[1].reduced_args.size() == 2);
  double pi = std::acos(-1.0);
  double x_small = std::atan(0.5) / (4.0 * pi);
  double x_big = 0.5 - x_small;
  std::vector<double> args = cls[1].reduced_args;
  std::sort(args.begin(), args.end());
  CHECK(args[0] == doctest::Approx(x_small).epsilon(1e-9));
  CHECK(args[1] == doctest::Approx(x_big).epsilon(1e-9));
}

TEST_CASE("rational detection is exact on the double's value") {
  auto r = detect_rational(0.5);
  REQUIRE(r);
  CHECK(r->first == 1);
  CHECK(r->second == 2);

  r = detect_rational(-0.5 + 1e-16);
  REQUIRE(r);
  CHECK(r->first == -1);
  CHECK(r->second == 2);

  r = detect_rational(1.0 / 3.0);
  REQUIRE(r);
  CHECK(r->first == 1);
  CHECK(r->second == 3);

  r = detect_rational(3.0);
  REQUIRE(r);
  CHECK(r->first == 3);
  CHECK(r->second == 1);

  CHECK_FALSE(detect_rational(std::log10(2.0)));

  // the denominator bound is honored
  CHECK_FALSE(detect_rational(0.01, 50));
  r = detect_rational(0.01, 100);
  REQUIRE(r);
  CHECK(r->first == 1);
  CHECK(r->second == 100);
}

TEST_CASE("integer relation search") {
  auto q = integer_relation({1.0, std::log10(2.0), 1.0 - std::log10(2.0)});
  REQUIRE(q);
  CHECK(*q == std::vector<long long>{-1, 1, 1});

  CHECK_FALSE(integer_relation({1.0, std::sqrt(2.0), std::sqrt(3.0)}, 20));

  // meet-in-the-middle path (5 entries); ties break on smallest max
  // coefficient, then lexicographically
  q = integer_relation({1.0, 0.3, 0.7, 0.15, 0.85});
  REQUIRE(q);
  CHECK(*q == std::vector<long long>{-1, 0, 0, 1, 1});

  // a numerically zero entry short-circuits to that axis
  q = integer_relation({1e-14, 0.5});
  REQUIRE(q);
  CHECK(*q == std::vector<long long>{-1, 0});

  CHECK_THROWS_AS(integer_relation({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(
      integer_relation({1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0}),
      DimensionTooLarge);
}

TEST_CASE("nonresonant chains get an exhausted-search certificate") {
  for (const char* f :
       {"ex2i.csv", "ex2ii.csv", "ex5ii.csv", "ex12.csv", "ex13.csv"}) {
    CAPTURE(f);
    auto v = verdict_of(f);
    CHECK(v.status == ResonanceVerdict::Status::nonresonant);
    CHECK(v.certificate.kind ==
          ResonanceCertificate::Kind::search_exhausted);
    CHECK(v.certificate.Qmax == 100);
    CHECK(v.certificate.eps == 1e-10);
  }
}

TEST_CASE("rational log-modulus witnesses") {
  auto v = verdict_of("ex3i.csv");  // lambda_2 = 0.1
  CHECK(v.status == ResonanceVerdict::Status::resonant);
  REQUIRE(v.certificate.kind == ResonanceCertificate::Kind::rational_log);
  CHECK(v.certificate.p == -1);
  CHECK(v.certificate.q == 1);
  CHECK(v.certificate.rational_err <= 1e-12);
  CHECK(v.certificate.class_L0 == doctest::Approx(0.1).epsilon(1e-12));

  v = verdict_of("ex3ii.csv");  // 0.2 passes, 0.1 is the witness
  CHECK(v.status == ResonanceVerdict::Status::resonant);
  REQUIRE(v.certificate.kind == ResonanceCertificate::Kind::rational_log);
  CHECK(v.certificate.p == -1);
  CHECK(v.certificate.q == 1);
  CHECK(v.certificate.class_L0 == doctest::Approx(0.1).epsilon(1e-10));

  v = verdict_of("ex6ii.csv");  // |lambda|^2 = 0.1 exactly
  CHECK(v.status == ResonanceVerdict::Status::resonant);
  REQUIRE(v.certificate.kind == ResonanceCertificate::Kind::rational_log);
  CHECK(v.certificate.p == -1);
  CHECK(v.certificate.q == 2);
  CHECK(v.certificate.rational_err <= 1e-12);
}

TEST_CASE("real-pair witnesses") {
  auto v = verdict_of("ex6i.csv");  // lambda = +/- sqrt(0.2)
  CHECK(v.status == ResonanceVerdict::Status::resonant);
  REQUIRE(v.certificate.kind == ResonanceCertificate::Kind::real_pair);
  double a = v.certificate.pair_a.real();
  double b = v.certificate.pair_b.real();
  if (a > b) std::swap(a, b);
  CHECK(a == doctest::Approx(-std::sqrt(0.2)).epsilon(1e-12));
  CHECK(b == doctest::Approx(std::sqrt(0.2)).epsilon(1e-12));
  CHECK(std::abs(v.certificate.pair_a.imag()) <= 1e-12);

  v = verdict_of("ex15ii.csv");  // lambda = +/- 0.3
  CHECK(v.status == ResonanceVerdict::Status::resonant);
  CHECK(v.certificate.kind == ResonanceCertificate::Kind::real_pair);
}

TEST_CASE("relation witnesses") {
  auto v = verdict_of("ex6iii.csv");  // lambda = +/- 0.2i
  CHECK(v.status == ResonanceVerdict::Status::resonant);
  REQUIRE(v.certificate.kind == ResonanceCertificate::Kind::relation);
  CHECK(v.certificate.relation == std::vector<long long>{-1, 0, 4});
  REQUIRE(v.certificate.relation_xs.size() == 3);
  CHECK(v.certificate.relation_xs[0] == 1.0);
  CHECK(v.certificate.relation_xs[1] ==
        doctest::Approx(std::log10(0.2)).epsilon(1e-12));
  CHECK(v.certificate.relation_xs[2] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(v.certificate.residual <= 1e-12);

  v = verdict_of("ex15i.csv");  // same rotation, different chain
  CHECK(v.status == ResonanceVerdict::Status::resonant);
  CHECK(v.certificate.kind == ResonanceCertificate::Kind::relation);

  v = verdict_of("ex6iv.csv");  // two pairs at 5^(1/4)/10
  CHECK(v.status == ResonanceVerdict::Status::resonant);
  REQUIRE(v.certificate.kind == ResonanceCertificate::Kind::relation);
  CHECK(v.certificate.relation == std::vector<long long>{-1, 0, 2, 2});
  CHECK(v.certificate.class_L0 ==
        doctest::Approx(std::pow(5.0, 0.25) / 10.0).epsilon(1e-10));
  CHECK(v.certificate.residual <= 1e-9);
}

TEST_CASE("a vanishing eigenvalue is resonant by itself") {
  Eigen::MatrixXd m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  auto v = nonresonance_verdict(validate_stochastic(m));
  CHECK(v.status == ResonanceVerdict::Status::resonant);
  CHECK(v.certificate.kind == ResonanceCertificate::Kind::singular);
  CHECK(std::abs(v.certificate.singular_eigenvalue) <= 1e-12);
}

TEST_CASE("the verdict is relative to the search budget") {
  // at Qmax = 1 the 1/2 witness is out of reach, and the certificate says
  // which bounds were searched
  auto v = verdict_of("ex6ii.csv", 1);
  CHECK(v.status == ResonanceVerdict::Status::nonresonant);
  CHECK(v.certificate.kind == ResonanceCertificate::Kind::search_exhausted);
  CHECK(v.certificate.Qmax == 1);

  auto v2 = verdict_of("ex6ii.csv", 2);
  CHECK(v2.status == ResonanceVerdict::Status::resonant);
}

TEST_CASE("gate failures propagate") {
  CHECK_THROWS_AS(verdict_of("period2.csv"), NotAperiodic);
}

TEST_CASE("per-class check exposes exhaustiveness") {
  auto cls = classes_of("ex13.csv");
  auto c = check_class(cls[0], 100, 1e-10);
  CHECK_FALSE(c.witness.has_value());
  CHECK(c.exhaustive);
}
