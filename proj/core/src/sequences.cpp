#include "benford/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace benford {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCoefTol = 1e-12;   // coefficient considered absent
constexpr double kZeroTol = 1e-12;   // |xi_n| below this = structural zero
constexpr double kDropDecades = 320.0;

// Running fractional part in double-double: hi + lo represents the
// accumulated value mod 1 with ~2^-105 of headroom, so a million additions
// cost nothing measurable. Additions must be O(1) in magnitude.
struct FracAccum {
  double hi = 0, lo = 0;

  void add(double x) {
    double s = hi + x;
    double bv = s - hi;
    double e = (hi - (s - bv)) + (x - bv);
    hi = s;
    lo += e;
    hi -= std::floor(hi);  // exact: |hi| < 2^52
    s = hi + lo;
    bv = s - hi;
    e = (hi - (s - bv)) + (lo - bv);
    hi = s - std::floor(s);
    lo = e;
  }
  double value() const { return frac1(hi + lo); }
};

struct SeriesTerm {
  std::complex<double> coef;
  double log10_ratio = 0;  // log10(|lambda| / L), <= 0
  bool is_real = false;
  bool sign_flip = false;  // real negative eigenvalue: factor (-1)^n
  double phi = 0;          // arg(lambda) / 2pi for complex terms
  FracAccum phase;
};

// Collect the coefficients of P^n - P* (or its successive difference) at
// component (i, j): coef_l = B_l(i,j), times (lambda_l - 1) for the
// difference kind. Terms below kCoefTol are absent.
void collect_terms(const SpectralDecomposition& dec, int i, int j,
                   SeriesKind kind,
                   std::vector<std::complex<double>>* coefs,
                   std::vector<std::complex<double>>* lams) {
  const int d = static_cast<int>(dec.eigen.eigenvalues.size());
  if (i < 0 || i >= d || j < 0 || j >= d)
    throw std::invalid_argument("component index out of range");
  for (int l = 1; l < d; ++l) {
    std::complex<double> c = dec.projectors[static_cast<size_t>(l)](i, j);
    if (kind == SeriesKind::successive_diff)
      c *= dec.eigen.eigenvalues[l] - 1.0;
    if (std::abs(c) <= kCoefTol) continue;
    coefs->push_back(c);
    lams->push_back(dec.eigen.eigenvalues[l]);
  }
}

// Core sweep. Emits (n, is_zero, frac_log10, log10_abs) for n = 1..N.
template <class Emit>
void run_component_series(const SpectralDecomposition& dec, int i, int j,
                          SeriesKind kind, long N, Emit&& emit) {
  if (N < 1 || N > 1000000) throw std::invalid_argument("N out of range");
  if (!dec.eigen.all_simple())
    throw MultipleEigenvalue("series requires a simple spectrum");

  std::vector<std::complex<double>> coefs, lams;
  collect_terms(dec, i, j, kind, &coefs, &lams);

  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (coefs.empty()) {
    for (long n = 1; n <= N; ++n) emit(n, true, 0.0, kNegInf);
    return;
  }

  double L = 0;
  for (const auto& lam : lams) L = std::max(L, std::abs(lam));
  if (L <= 0) {
    for (long n = 1; n <= N; ++n) emit(n, true, 0.0, kNegInf);
    return;
  }
  const double log10L = std::log10(L);
  const double K = std::floor(log10L);
  const double f0 = log10L - K;  // exact split

  std::vector<SeriesTerm> terms;
  terms.reserve(coefs.size());
  for (size_t k = 0; k < coefs.size(); ++k) {
    SeriesTerm t;
    t.coef = coefs[k];
    double r = std::abs(lams[k]) / L;
    if (r > 1.0 - 1e-14) r = 1.0;  // same modulus class as the dominant
    t.log10_ratio = (r == 1.0) ? 0.0 : std::log10(r);
    if (std::abs(lams[k].imag()) <= 1e-12) {
      t.is_real = true;
      t.sign_flip = lams[k].real() < 0;
    } else {
      t.phi = std::atan2(lams[k].imag(), lams[k].real()) / kTwoPi;
    }
    terms.push_back(t);
  }

  FracAccum main;
  for (long n = 1; n <= N; ++n) {
    main.add(f0);
    // retire terms that have fallen hopelessly behind the dominant one
    terms.erase(std::remove_if(terms.begin(), terms.end(),
                               [n](const SeriesTerm& t) {
                                 return static_cast<double>(n) * t.log10_ratio <
                                        -kDropDecades;
                               }),
                terms.end());
    std::complex<double> xi = 0;
    for (auto& t : terms) {
      double mag = t.log10_ratio == 0.0
                       ? 1.0
                       : std::pow(10.0, static_cast<double>(n) * t.log10_ratio);
      if (t.is_real) {
        double s = (t.sign_flip && (n & 1)) ? -1.0 : 1.0;
        xi += t.coef * (mag * s);
      } else {
        t.phase.add(t.phi);
        xi += t.coef * std::polar(mag, kTwoPi * t.phase.value());
      }
    }
    const double a = std::abs(xi);
    if (a <= kZeroTol) {
      emit(n, true, 0.0, kNegInf);
    } else {
      const double lg = std::log10(a);
      emit(n, false, frac1(main.value() + lg),
           static_cast<double>(n) * log10L + lg);
    }
  }
}

}  // namespace

LogSignificandSeries component_log_series(const SpectralDecomposition& dec,
                                          int i, int j, SeriesKind kind,
                                          long N) {
  LogSignificandSeries out;
  out.i = i;
  out.j = j;
  out.kind = kind;
  out.entries.reserve(static_cast<size_t>(N));
  run_component_series(dec, i, j, kind, N,
                       [&](long n, bool zero, double frac, double labs) {
                         LogEntry e;
                         e.n = n;
                         e.is_zero = zero;
                         e.frac_log10 = frac;
                         e.log10_abs = labs;
                         out.entries.push_back(e);
                       });
  return out;
}

DigitFrequencyTable tally_component_first_digits(
    const SpectralDecomposition& dec, int i, int j, SeriesKind kind, long N) {
  DigitFrequencyTable t;
  run_component_series(dec, i, j, kind, N,
                       [&](long, bool zero, double frac, double) {
                         if (!zero) t.add(first_digit_from_frac(frac));
                       });
  return t;
}

namespace {

BigInt rat_floor(const BigRational& x) {
  // nonnegative arguments only
  return numerator(x) / denominator(x);
}

// Simplest rational in [lo, hi] (smallest denominator), by the classic
// continued-fraction walk down the common prefix of the endpoints.
// Expects 0 <= lo <= hi; bails to lo if the walk runs away.
BigRational simplest_in(BigRational lo, BigRational hi) {
  std::vector<BigInt> gs;
  BigRational a = std::move(lo), b = std::move(hi);
  BigRational tail;
  for (int step = 0;; ++step) {
    if (step > 200) return a;
    if (a == b) {
      tail = a;
      break;
    }
    BigInt ca = (numerator(a) + denominator(a) - 1) / denominator(a);
    if (BigRational(ca) <= b) {
      tail = BigRational(ca);  // an integer lies in the interval
      break;
    }
    BigInt g = rat_floor(a);
    gs.push_back(g);
    BigRational fa = a - BigRational(g);
    BigRational fb = b - BigRational(g);
    a = 1 / fb;  // interval endpoints swap under inversion
    b = 1 / fa;
  }
  for (auto it = gs.rbegin(); it != gs.rend(); ++it)
    tail = BigRational(*it) + 1 / tail;
  return tail;
}

// A double entry is a rounded presentation of the chain. When a rational
// with a small denominator sits within an ulp-scale window of the entry,
// take it as the intended value (0.15 really means 3/20); otherwise keep
// the exact dyadic value of the double. Snapping never crosses zero, so
// the transition structure is preserved.
BigRational lift_entry(double e) {
  BigRational v(e);
  if (e == 0.0) return v;
  BigRational eps(std::min(1e-15, e / 2));
  BigRational s = simplest_in(v - eps, v + eps);
  if (denominator(s) > 1000000) return v;
  return s;
}

// Stationary vector in extended precision: least-squares solve of the
// stacked system [(Pb^T - I); 1^T] pi = e_{d+1} via its normal equations,
// Gaussian elimination with partial pivoting. Expects the row-normalized
// lift (see fallback_impl) and runs under the caller's precision guard.
std::vector<BigFloat> big_stationary(const BigMatrix& Pb) {
  const int d = Pb.d;
  std::vector<BigFloat> A(static_cast<size_t>(d) * d);
  std::vector<BigFloat> rhs(static_cast<size_t>(d), BigFloat(1));
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      BigFloat s = 1;  // contribution of the all-ones row
      for (int r = 0; r < d; ++r) {
        BigFloat Ba = Pb.at(a, r) - (r == a ? 1 : 0);
        BigFloat Bb = Pb.at(b, r) - (r == b ? 1 : 0);
        s += Ba * Bb;
      }
      A[static_cast<size_t>(a) * d + b] = s;
    }
  }
  for (int col = 0; col < d; ++col) {
    int piv = col;
    for (int r = col + 1; r < d; ++r)
      if (abs(A[static_cast<size_t>(r) * d + col]) >
          abs(A[static_cast<size_t>(piv) * d + col]))
        piv = r;
    if (piv != col) {
      for (int c = 0; c < d; ++c)
        std::swap(A[static_cast<size_t>(col) * d + c],
                  A[static_cast<size_t>(piv) * d + c]);
      std::swap(rhs[static_cast<size_t>(col)], rhs[static_cast<size_t>(piv)]);
    }
    const BigFloat& p = A[static_cast<size_t>(col) * d + col];
    for (int r = col + 1; r < d; ++r) {
      BigFloat f = A[static_cast<size_t>(r) * d + col] / p;
      for (int c = col; c < d; ++c)
        A[static_cast<size_t>(r) * d + c] -=
            f * A[static_cast<size_t>(col) * d + c];
      rhs[static_cast<size_t>(r)] -= f * rhs[static_cast<size_t>(col)];
    }
  }
  std::vector<BigFloat> pi(static_cast<size_t>(d));
  for (int r = d - 1; r >= 0; --r) {
    BigFloat s = rhs[static_cast<size_t>(r)];
    for (int c = r + 1; c < d; ++c)
      s -= A[static_cast<size_t>(r) * d + c] * pi[static_cast<size_t>(c)];
    pi[static_cast<size_t>(r)] = s / A[static_cast<size_t>(r) * d + r];
  }
  BigFloat total = 0;
  for (const auto& x : pi) total += x;
  for (auto& x : pi) x /= total;
  return pi;
}

std::vector<LogSignificandSeries> fallback_impl(const StochasticMatrix& P,
                                                SeriesKind kind, long N,
                                                int only_i, int only_j) {
  if (N < 1 || N > 20000) throw std::invalid_argument("N out of range");
  require_unichain_aperiodic(P);
  const int d = P.d();

  // Precision: resolving |lambda_min|^N takes N*log2(1/|lambda_min|) bits;
  // numerically-zero eigenvalues die after d steps and are excluded.
  double lam_min = 1.0;
  {
    EigenStructure eig = eigen_decompose(P);
    for (int l = 0; l < d; ++l) {
      double a = std::abs(eig.eigenvalues[l]);
      if (a > 1e-12) lam_min = std::min(lam_min, a);
    }
  }
  double bits_est =
      std::max(256.0, std::ceil(static_cast<double>(N) *
                                std::log2(1.0 / lam_min))) +
      256.0;
  if (bits_est > static_cast<double>(1 << 18))
    throw PrecisionBudgetExceeded("series needs " +
                                  std::to_string(static_cast<long>(bits_est)) +
                                  " bits");
  const int bits = static_cast<int>(bits_est);
  PrecisionGuard guard(static_cast<unsigned>(bits));

  // Lift the entries to exact rationals (snapping to intended values, see
  // lift_entry) and renormalize each row exactly. Powering the raw double
  // lift would leave a Perron value of 1 - eps whose drift (about n*eps)
  // swamps the decaying terms, and ulp-level ghosts of coefficients that
  // cancel exactly for the intended chain would outgrow slower terms; the
  // rational lift removes both. Structural zeros survive unchanged.
  BigMatrix Pb(d);
  {
    std::vector<BigRational> rat(static_cast<size_t>(d) * d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        rat[static_cast<size_t>(i) * d + j] = lift_entry(P(i, j));
    for (int i = 0; i < d; ++i) {
      BigRational rowsum = 0;
      for (int j = 0; j < d; ++j)
        rowsum += rat[static_cast<size_t>(i) * d + j];
      for (int j = 0; j < d; ++j) {
        // materialize before converting: feeding the division expression
        // template straight to the BigFloat constructor makes this boost
        // version promote the target precision to "unbounded"
        BigRational q = rat[static_cast<size_t>(i) * d + j] / rowsum;
        Pb.at(i, j) = BigFloat(q);
      }
    }
  }

  std::vector<BigFloat> pi;
  if (kind == SeriesKind::pn_minus_pstar) pi = big_stationary(Pb);

  std::vector<LogSignificandSeries> out;
  auto want = [&](int i, int j) {
    return only_i < 0 || (i == only_i && j == only_j);
  };
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (want(i, j)) {
        LogSignificandSeries s;
        s.i = i;
        s.j = j;
        s.kind = kind;
        s.entries.reserve(static_cast<size_t>(N));
        out.push_back(std::move(s));
      }

  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  BigMatrix M = Pb;
  for (long n = 1; n <= N; ++n) {
    BigMatrix Mnext = big_mul(M, Pb);
    // Everything the power iteration can certify as zero really is zero up
    // to accumulated roundoff; the slack grows slowly with n and d.
    BigFloat thr = ldexp(BigFloat(static_cast<double>((n + 4) * (d + 2))),
                         64 - bits);
    size_t idx = 0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        if (!want(i, j)) continue;
        BigFloat x = kind == SeriesKind::pn_minus_pstar
                         ? M.at(i, j) - pi[static_cast<size_t>(j)]
                         : Mnext.at(i, j) - M.at(i, j);
        LogEntry e;
        e.n = n;
        BigFloat ax = abs(x);
        if (ax <= thr) {
          e.is_zero = true;
          e.log10_abs = kNegInf;
        } else {
          BigFloat lg = log10(ax);
          e.log10_abs = static_cast<double>(lg);
          e.frac_log10 = frac1(static_cast<double>(lg - floor(lg)));
        }
        out[idx++].entries.push_back(e);
      }
    M = std::move(Mnext);
  }

  // Second pass: intended zeros. The double entries only present the chain
  // to about 16 digits, so a component that cancels exactly for the ideal
  // chain shows up here as an isolated residual ~12+ decades below its
  // neighbors instead of an exact zero. Flag anything that far below the
  // adjacent magnitudes as zero, mirroring the spectral path's treatment
  // of sub-threshold noise at intended zeros.
  for (auto& s : out) {
    auto& es = s.entries;
    const size_t m = es.size();
    std::vector<double> labs(m);
    for (size_t t = 0; t < m; ++t)
      labs[t] = es[t].is_zero ? kNegInf : es[t].log10_abs;
    for (size_t t = 0; t < m; ++t) {
      if (es[t].is_zero) continue;
      double nb = kNegInf;
      if (t > 0) nb = std::max(nb, labs[t - 1]);
      if (t + 1 < m) nb = std::max(nb, labs[t + 1]);
      if (std::isfinite(nb) && labs[t] <= nb - 12.0) {
        es[t].is_zero = true;
        es[t].log10_abs = kNegInf;
        es[t].frac_log10 = 0.0;
      }
    }
  }
  return out;
}

}  // namespace

LogSignificandSeries fallback_log_series(const StochasticMatrix& P, int i,
                                         int j, SeriesKind kind, long N) {
  if (i < 0 || i >= P.d() || j < 0 || j >= P.d())
    throw std::invalid_argument("component index out of range");
  return std::move(fallback_impl(P, kind, N, i, j)[0]);
}

std::vector<LogSignificandSeries> fallback_log_series_all(
    const StochasticMatrix& P, SeriesKind kind, long N) {
  return fallback_impl(P, kind, N, -1, -1);
}

ComponentVerdict component_verdict(const SpectralDecomposition& dec,
                                   const ResonanceVerdict& resonance, int i,
                                   int j, SeriesKind kind) {
  std::vector<std::complex<double>> coefs, lams;
  collect_terms(dec, i, j, kind, &coefs, &lams);
  if (coefs.empty()) return ComponentVerdict::EventuallyZero;
  if (resonance.status == ResonanceVerdict::Status::nonresonant)
    return ComponentVerdict::BenfordPredicted;

  const long long Qmax =
      resonance.certificate.Qmax > 0 ? resonance.certificate.Qmax : 100;
  const double eps =
      resonance.certificate.eps > 0 ? resonance.certificate.eps : 1e-10;

  double L = 0;
  for (const auto& lam : lams) L = std::max(L, std::abs(lam));
  if (L <= 1e-12) return ComponentVerdict::Undetermined;

  // Eigenvalues that both carry weight at (i,j) and sit at the top modulus
  // decide the significand behaviour; everything else decays away relative
  // to them.
  std::vector<size_t> dom;
  for (size_t k = 0; k < lams.size(); ++k)
    if (std::abs(lams[k]) >= L - 1e-9) dom.push_back(k);

  if (dom.size() == 1 && std::abs(lams[dom[0]].imag()) <= 1e-9) {
    // Lone real dominant term: Benford iff log10|lambda| is irrational.
    if (detect_rational(std::log10(L), Qmax, eps))
      return ComponentVerdict::NonBenfordRationalLog;
    return ComponentVerdict::BenfordPredicted;
  }

  // Rational-phase dominant group: the rotation pattern repeats with period
  // K, so the residues r with vanishing combined weight recur forever.
  std::vector<long long> ps, qs;
  bool all_rational = true;
  for (size_t k : dom) {
    double phi;
    if (std::abs(lams[k].imag()) <= 1e-9) {
      phi = lams[k].real() >= 0 ? 0.0 : 0.5;
    } else {
      phi = std::atan2(lams[k].imag(), lams[k].real()) / kTwoPi;
    }
    auto r = detect_rational(phi, Qmax, 1e-12);
    if (!r) {
      all_rational = false;
      break;
    }
    ps.push_back(r->first);
    qs.push_back(r->second);
  }
  if (all_rational) {
    long long K = 1;
    for (long long q : qs) {
      K = std::lcm(K, q);
      if (K > 1000) {
        K = -1;
        break;
      }
    }
    if (K > 0) {
      bool any_zero = false, any_nonzero = false;
      for (long long r = 0; r < K; ++r) {
        std::complex<double> m = 0;
        for (size_t t = 0; t < dom.size(); ++t) {
          long long rp = ((r * ps[t]) % qs[t] + qs[t]) % qs[t];
          m += coefs[dom[t]] *
               std::polar(1.0, kTwoPi * static_cast<double>(rp) /
                                   static_cast<double>(qs[t]));
        }
        (std::abs(m) <= kZeroTol ? any_zero : any_nonzero) = true;
      }
      if (any_zero && any_nonzero) return ComponentVerdict::NonBenfordResonant;
      if (!any_zero && detect_rational(std::log10(L), Qmax, eps))
        // Periodic rotation and a rational log-modulus: the significand
        // cycles through finitely many values.
        return ComponentVerdict::NonBenfordRationalLog;
    }
  }
  return ComponentVerdict::Undetermined;
}

std::vector<double> classic_sequence_logs(ClassicSequence kind, long N) {
  if (N < 1 || N > 1000000) throw std::invalid_argument("N out of range");
  std::vector<double> out;
  out.reserve(static_cast<size_t>(N));
  switch (kind) {
    case ClassicSequence::pow2: {
      const double l2 = std::log10(2.0);
      for (long n = 1; n <= N; ++n)
        out.push_back(static_cast<double>(n) * l2);
      break;
    }
    case ClassicSequence::factorial: {
      double sum = 0, c = 0;  // Kahan
      for (long n = 1; n <= N; ++n) {
        double y = std::log10(static_cast<double>(n)) - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
        out.push_back(sum);
      }
      break;
    }
    case ClassicSequence::fibonacci: {
      // Exact through F_90 = 2880067194370816120 (still < 2^63); past that
      // the closed form n*log10(phi) - log10(sqrt 5) is already accurate to
      // ~1e-37.
      const double lphi = std::log10((1.0 + std::sqrt(5.0)) / 2.0);
      const double lsqrt5 = 0.5 * std::log10(5.0);
      unsigned long long fprev = 0, fcur = 1;  // F_0, F_1
      for (long n = 1; n <= N; ++n) {
        if (n <= 90) {
          if (n > 1) {
            unsigned long long t = fprev + fcur;
            fprev = fcur;
            fcur = t;
          }
          out.push_back(std::log10(static_cast<double>(fcur)));
        } else {
          out.push_back(static_cast<double>(n) * lphi - lsqrt5);
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace benford
