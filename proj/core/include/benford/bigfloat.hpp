#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <vector>

namespace benford {

// Arbitrary-precision float (MPFR backed, precision set at runtime) and the
// exact integer/rational types used by the continued-fraction machinery.
using BigFloat =
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                  boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Sets the default BigFloat precision for a scope. Operations allocate
// results at the default precision, so kernels wrap themselves in one of
// these. The setting is process-global in this boost version, which is why
// every extended-precision kernel runs on the calling thread only; the one
// multi-threaded code path (the Monte Carlo sweep) never touches BigFloat.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned bits)
      : saved_(BigFloat::default_precision()) {
    // boost counts decimal digits; overshoot the bit request slightly.
    BigFloat::default_precision(static_cast<unsigned>(bits / 3.2) + 4);
  }
  ~PrecisionGuard() { BigFloat::default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

// Minimal dense square matrix of BigFloat, row-major.
struct BigMatrix {
  int d = 0;
  std::vector<BigFloat> v;

  BigMatrix() = default;
  explicit BigMatrix(int dim) : d(dim), v(static_cast<size_t>(dim) * dim) {}
  BigFloat& at(int i, int j) { return v[static_cast<size_t>(i) * d + j]; }
  const BigFloat& at(int i, int j) const {
    return v[static_cast<size_t>(i) * d + j];
  }
};

BigMatrix big_identity(int d);
BigMatrix big_mul(const BigMatrix& a, const BigMatrix& b);

}  // namespace benford
