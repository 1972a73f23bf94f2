#include "benford/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "benford/bigfloat.hpp"

namespace benford {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

BigInt rat_floor(const BigRational& y) {
  BigInt num = numerator(y), den = denominator(y);  // den > 0
  BigInt q = num / den;                             // truncates toward zero
  if (num < 0 && q * den != num) --q;
  return q;
}

}  // namespace

std::vector<ModulusClass> modulus_classes(const EigenStructure& eig,
                                          double tol) {
  const int d = static_cast<int>(eig.eigenvalues.size());
  std::vector<std::complex<double>> uniq;
  for (int l = 1; l < d; ++l) {
    std::complex<double> lam = eig.eigenvalues[l];
    if (lam.imag() < -1e-12) continue;  // conjugate partner represents the pair
    bool dup = false;
    for (const auto& u : uniq)
      if (std::abs(lam - u) <= 1e-8) {  // numerical copy of a repeated root
        dup = true;
        break;
      }
    if (!dup) uniq.push_back(lam);
  }
  std::stable_sort(uniq.begin(), uniq.end(),
                   [](const std::complex<double>& a,
                      const std::complex<double>& b) {
                     return std::abs(a) > std::abs(b);
                   });
  std::vector<ModulusClass> classes;
  for (const auto& lam : uniq) {
    double m = std::abs(lam);
    if (!classes.empty() && classes.back().L0 - m <= tol) {
      classes.back().members.push_back(lam);
    } else {
      ModulusClass c;
      c.L0 = m;
      c.members.push_back(lam);
      classes.push_back(std::move(c));
    }
  }
  for (auto& cls : classes) {
    for (const auto& lam : cls.members) {
      double a = std::atan2(lam.imag(), lam.real()) / kTwoPi;  // in [0, 1/2]
      if (a > 1e-12 && a < 0.5 - 1e-12) cls.reduced_args.push_back(a);
    }
  }
  for (size_t i = 0; i < classes.size(); ++i)
    for (size_t j = i + 1; j < classes.size(); ++j)
      if (std::abs(classes[i].L0 - classes[j].L0) <= 10 * tol) {
        classes[i].gap_warning = true;
        classes[j].gap_warning = true;
      }
  return classes;
}

std::optional<std::pair<long long, long long>> detect_rational(double x,
                                                               long long Qmax,
                                                               double eps) {
  if (!std::isfinite(x) || Qmax < 1 || eps < 0) return std::nullopt;
  const BigRational r(x);  // the double's exact value
  const BigRational tol(eps);
  const BigInt kLimit = BigInt(1) << 62;
  BigInt pm1 = 1, pm2 = 0, qm1 = 0, qm2 = 1;
  BigRational y = r;
  for (int it = 0; it < 400; ++it) {
    BigInt a = rat_floor(y);
    BigInt p = a * pm1 + pm2;
    BigInt q = a * qm1 + qm2;
    if (q > Qmax) break;
    if (abs(p) < kLimit) {
      BigRational err = abs(r - BigRational(p, q));
      if (err <= tol)
        return std::make_pair(static_cast<long long>(p),
                              static_cast<long long>(q));
    }
    BigRational f = y - BigRational(a);
    if (f == 0) break;  // rational input fully expanded
    y = 1 / f;
    pm2 = pm1;
    pm1 = p;
    qm2 = qm1;
    qm1 = q;
  }
  return std::nullopt;
}

namespace {

long long max_abs(const std::vector<long long>& v) {
  long long m = 0;
  for (long long x : v) m = std::max(m, x < 0 ? -x : x);
  return m;
}

void normalize_relation(std::vector<long long>& q) {
  long long g = 0;
  for (long long v : q) g = std::gcd(g, v);
  if (g > 1)
    for (long long& v : q) v /= g;
  for (long long v : q) {
    if (v == 0) continue;
    if (v > 0)
      for (long long& w : q) w = -w;
    break;
  }
}

bool relation_less(const std::vector<long long>& a,
                   const std::vector<long long>& b) {
  long long ma = max_abs(a), mb = max_abs(b);
  if (ma != mb) return ma < mb;
  return a < b;
}

struct MitmEntry {
  double r;  // partial sum mod M, in [0, M)
  double t;  // partial sum itself
  int code;  // encodes the coefficient tuple
};

}  // namespace

std::optional<std::vector<long long>> integer_relation(
    const std::vector<double>& xs, long long Qmax, double eps) {
  const int k = static_cast<int>(xs.size());
  if (k < 2) throw std::invalid_argument("need at least two values");
  if (k > 6) throw DimensionTooLarge("relation search supports up to 6 values");
  if (Qmax < 1) throw std::invalid_argument("Qmax must be positive");
  if (eps < 0) throw std::invalid_argument("eps must be non-negative");
  for (double x : xs)
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite input");

  // A value that is itself ~0 is a one-term relation.
  for (int j = 0; j < k; ++j)
    if (std::abs(xs[j]) <= eps) {
      std::vector<long long> q(static_cast<size_t>(k), 0);
      q[static_cast<size_t>(j)] = -1;
      return q;
    }

  int piv = 0;
  for (int j = 1; j < k; ++j)
    if (std::abs(xs[j]) > std::abs(xs[piv])) piv = j;
  std::vector<int> np;
  for (int j = 0; j < k; ++j)
    if (j != piv) np.push_back(j);
  const int m = k - 1;
  const double B = 2.0 * static_cast<double>(Qmax) + 1.0;

  std::optional<std::vector<long long>> best;
  auto consider = [&](std::vector<long long> q) {
    bool nonzero = false;
    for (long long v : q) nonzero |= v != 0;
    if (!nonzero) return;
    double t = 0;
    for (int j = 0; j < k; ++j)
      t += static_cast<double>(q[static_cast<size_t>(j)]) *
           xs[static_cast<size_t>(j)];
    if (std::abs(t) > eps) return;
    normalize_relation(q);
    if (!best || relation_less(q, *best)) best = std::move(q);
  };

  if (m <= 3) {
    if (std::pow(B, m) > 2e8)
      throw std::invalid_argument("Qmax too large for exhaustive search");
    std::vector<long long> c(static_cast<size_t>(m), -Qmax);
    while (true) {
      double t = 0;
      for (int i = 0; i < m; ++i)
        t += static_cast<double>(c[static_cast<size_t>(i)]) *
             xs[static_cast<size_t>(np[static_cast<size_t>(i)])];
      long long qp = std::llround(-t / xs[static_cast<size_t>(piv)]);
      if (qp >= -Qmax && qp <= Qmax) {
        std::vector<long long> full(static_cast<size_t>(k), 0);
        for (int i = 0; i < m; ++i)
          full[static_cast<size_t>(np[static_cast<size_t>(i)])] =
              c[static_cast<size_t>(i)];
        full[static_cast<size_t>(piv)] = qp;
        consider(std::move(full));
      }
      int i = 0;
      while (i < m) {
        if (++c[static_cast<size_t>(i)] <= Qmax) break;
        c[static_cast<size_t>(i)] = -Qmax;
        ++i;
      }
      if (i == m) break;
    }
    return best;
  }

  // Five or six values: meet in the middle modulo M = |x_pivot|. The sorted
  // half holds floor(m/2) coordinates; the enumerated half looks its
  // complement residue up in three wrap windows.
  const int mA = m / 2;
  const int mB = m - mA;
  if (std::pow(B, mA) > 2e8 || std::pow(B, mB) > 2e8)
    throw std::invalid_argument("Qmax too large for exhaustive search");
  const double M = std::abs(xs[static_cast<size_t>(piv)]);
  const double w = eps + 1e-9;  // window slack over residue roundoff

  std::vector<MitmEntry> side;
  {
    std::vector<long long> c(static_cast<size_t>(mA), -Qmax);
    int code = 0;
    const int total = static_cast<int>(std::llround(std::pow(B, mA)));
    side.reserve(static_cast<size_t>(total));
    while (true) {
      double t = 0;
      for (int i = 0; i < mA; ++i)
        t += static_cast<double>(c[static_cast<size_t>(i)]) *
             xs[static_cast<size_t>(np[static_cast<size_t>(i)])];
      double r = t - M * std::floor(t / M);
      if (r >= M) r -= M;
      if (r < 0) r = 0;
      side.push_back({r, t, code});
      ++code;
      int i = 0;
      while (i < mA) {
        if (++c[static_cast<size_t>(i)] <= Qmax) break;
        c[static_cast<size_t>(i)] = -Qmax;
        ++i;
      }
      if (i == mA) break;
    }
    std::sort(side.begin(), side.end(),
              [](const MitmEntry& a, const MitmEntry& b) {
                if (a.r != b.r) return a.r < b.r;
                return a.code < b.code;
              });
  }

  auto decode = [&](int code, std::vector<long long>& into) {
    for (int i = 0; i < mA; ++i) {
      into[static_cast<size_t>(i)] =
          code % static_cast<long long>(B) - Qmax;
      code /= static_cast<int>(B);
    }
  };

  std::vector<long long> cB(static_cast<size_t>(mB), -Qmax);
  std::vector<long long> cA(static_cast<size_t>(mA), 0);
  while (true) {
    double tB = 0;
    for (int i = 0; i < mB; ++i)
      tB += static_cast<double>(cB[static_cast<size_t>(i)]) *
            xs[static_cast<size_t>(np[static_cast<size_t>(mA + i)])];
    double rB = tB - M * std::floor(tB / M);
    if (rB >= M) rB -= M;
    if (rB < 0) rB = 0;
    for (double target : {-rB, M - rB, 2.0 * M - rB}) {
      double lo = target - w, hi = target + w;
      if (hi < 0 || lo >= M) continue;
      auto it = std::lower_bound(side.begin(), side.end(), lo,
                                 [](const MitmEntry& e, double v) {
                                   return e.r < v;
                                 });
      for (; it != side.end() && it->r <= hi; ++it) {
        double t = it->t + tB;
        long long qp = std::llround(-t / xs[static_cast<size_t>(piv)]);
        if (qp < -Qmax || qp > Qmax) continue;
        decode(it->code, cA);
        std::vector<long long> full(static_cast<size_t>(k), 0);
        for (int i = 0; i < mA; ++i)
          full[static_cast<size_t>(np[static_cast<size_t>(i)])] =
              cA[static_cast<size_t>(i)];
        for (int i = 0; i < mB; ++i)
          full[static_cast<size_t>(np[static_cast<size_t>(mA + i)])] =
              cB[static_cast<size_t>(i)];
        full[static_cast<size_t>(piv)] = qp;
        consider(std::move(full));
      }
    }
    int i = 0;
    while (i < mB) {
      if (++cB[static_cast<size_t>(i)] <= Qmax) break;
      cB[static_cast<size_t>(i)] = -Qmax;
      ++i;
    }
    if (i == mB) break;
  }
  return best;
}

ClassCheck check_class(const ModulusClass& cls, long long Qmax, double eps) {
  ClassCheck out;
  std::vector<std::complex<double>> reals;
  for (const auto& lam : cls.members)
    if (std::abs(lam.imag()) <= 1e-9) reals.push_back(lam);
  if (reals.size() >= 2) {
    ResonanceCertificate c;
    c.kind = ResonanceCertificate::Kind::real_pair;
    c.Qmax = Qmax;
    c.eps = eps;
    c.class_L0 = cls.L0;
    c.pair_a = reals[0];
    c.pair_b = reals[1];
    out.witness = c;
    return out;
  }

  const double lg = std::log10(cls.L0);
  if (auto r = detect_rational(lg, Qmax, eps)) {
    ResonanceCertificate c;
    c.kind = ResonanceCertificate::Kind::rational_log;
    c.Qmax = Qmax;
    c.eps = eps;
    c.class_L0 = cls.L0;
    c.p = r->first;
    c.q = r->second;
    c.rational_err = std::abs(lg - static_cast<double>(r->first) /
                                       static_cast<double>(r->second));
    out.witness = c;
    return out;
  }

  std::vector<double> xs{1.0, lg};
  for (double a : cls.reduced_args) xs.push_back(a);

  // A single rational argument is already a two-term relation; the direct
  // check sees tighter denominators than the joint search does.
  for (size_t t = 0; t < cls.reduced_args.size(); ++t) {
    if (auto r = detect_rational(cls.reduced_args[t], Qmax, 1e-12)) {
      std::vector<long long> rel(xs.size(), 0);
      rel[0] = -r->first;
      rel[2 + t] = r->second;
      ResonanceCertificate c;
      c.kind = ResonanceCertificate::Kind::relation;
      c.Qmax = Qmax;
      c.eps = eps;
      c.class_L0 = cls.L0;
      c.relation = rel;
      c.relation_xs = xs;
      double resid = 0;
      for (size_t j = 0; j < xs.size(); ++j)
        resid += static_cast<double>(rel[j]) * xs[j];
      c.residual = std::abs(resid);
      out.witness = c;
      return out;
    }
  }

  if (xs.size() > 6) {
    out.exhaustive = false;
    return out;
  }
  if (auto rel = integer_relation(xs, Qmax, eps)) {
    ResonanceCertificate c;
    c.kind = ResonanceCertificate::Kind::relation;
    c.Qmax = Qmax;
    c.eps = eps;
    c.class_L0 = cls.L0;
    c.relation = *rel;
    c.relation_xs = xs;
    double resid = 0;
    for (size_t j = 0; j < xs.size(); ++j)
      resid += static_cast<double>((*rel)[j]) * xs[j];
    c.residual = std::abs(resid);
    out.witness = c;
  }
  return out;
}

ResonanceVerdict nonresonance_verdict(const StochasticMatrix& P,
                                      const EigenStructure& eig,
                                      long long Qmax, double eps) {
  require_unichain_aperiodic(P);
  ResonanceVerdict v;
  v.certificate.Qmax = Qmax;
  v.certificate.eps = eps;
  const int d = static_cast<int>(eig.eigenvalues.size());
  for (int l = 0; l < d; ++l) {
    if (std::abs(eig.eigenvalues[l]) <= 1e-12) {
      v.status = ResonanceVerdict::Status::resonant;
      v.certificate.kind = ResonanceCertificate::Kind::singular;
      v.certificate.singular_eigenvalue = eig.eigenvalues[l];
      return v;
    }
  }
  bool all_exhaustive = true;
  for (const auto& cls : modulus_classes(eig)) {
    ClassCheck chk = check_class(cls, Qmax, eps);
    if (chk.witness) {
      v.status = ResonanceVerdict::Status::resonant;
      v.certificate = *chk.witness;
      return v;
    }
    if (!chk.exhaustive) all_exhaustive = false;
  }
  v.status = all_exhaustive ? ResonanceVerdict::Status::nonresonant
                            : ResonanceVerdict::Status::undecided;
  v.certificate.kind = ResonanceCertificate::Kind::search_exhausted;
  return v;
}

ResonanceVerdict nonresonance_verdict(const StochasticMatrix& P,
                                      long long Qmax, double eps) {
  return nonresonance_verdict(P, eigen_decompose(P), Qmax, eps);
}

}  // namespace benford
