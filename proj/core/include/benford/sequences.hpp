#pragma once

#include <vector>

#include "benford/resonance.hpp"
#include "benford/significand.hpp"
#include "benford/spectral.hpp"

namespace benford {

enum class SeriesKind { pn_minus_pstar, successive_diff };

// One term of log10|x_n|. Zero entries carry no log value. frac_log10 keeps
// the fractional part at full precision (the raw log10_abs loses low bits
// once n * log10 L grows large); digit statistics read frac_log10.
struct LogEntry {
  long n = 0;
  double log10_abs = 0;
  double frac_log10 = 0;
  bool is_zero = false;
};

struct LogSignificandSeries {
  int i = 0, j = 0;  // 0-based component indices
  SeriesKind kind = SeriesKind::pn_minus_pstar;
  std::vector<LogEntry> entries;  // n = 1..N
};

// log10 |(P^n - P*)^(i,j)| (or the successive difference) evaluated from the
// spectral decomposition entirely in the log domain: with L the dominant
// contributing modulus, log10|x_n| = n*log10 L + log10|xi_n| where xi_n sums
// the coefficients times (lambda/L)^n. Fractional parts accumulate in
// double-double, subdominant terms drop once they fall 320 decades behind,
// and |xi_n| <= 1e-12 flags an exact zero. Throws MultipleEigenvalue when
// the decomposition's spectrum is not simple. N <= 1e6.
LogSignificandSeries component_log_series(const SpectralDecomposition& dec,
                                          int i, int j, SeriesKind kind,
                                          long N);

// Same series by extended-precision matrix powers (covers non-simple
// spectra). Works on the row-normalized lift of the double entries, and
// flags residuals sitting 12+ decades below their neighbors as intended
// zeros, matching the spectral path's zero handling. Precision grows with
// N * log2(1/|lambda_min|); budget errors as PrecisionBudgetExceeded.
// N <= 2e4.
LogSignificandSeries fallback_log_series(const StochasticMatrix& P, int i,
                                         int j, SeriesKind kind, long N);
// All d^2 components in one power sweep (what the CLI uses).
std::vector<LogSignificandSeries> fallback_log_series_all(
    const StochasticMatrix& P, SeriesKind kind, long N);

// Streaming first-digit tally of a component series (no entry storage);
// zero entries count toward neither digit nor total.
DigitFrequencyTable tally_component_first_digits(
    const SpectralDecomposition& dec, int i, int j, SeriesKind kind, long N);

enum class ComponentVerdict {
  BenfordPredicted,
  EventuallyZero,
  NonBenfordRationalLog,
  NonBenfordResonant,
  Undetermined,
};

// Decides what the theory decides and stops there:
//   EventuallyZero        all coefficients vanish;
//   BenfordPredicted      nonresonant chain, or a lone real dominant
//                         eigenvalue with irrational log;
//   NonBenfordRationalLog dominant log-modulus detected rational (lone real
//                         eigenvalue, or rational-phase group with rational
//                         log and no cancellation: finitely many
//                         significands);
//   NonBenfordResonant    rational-phase dominant group whose periodic
//                         pattern contains exact zeros (alternating-zero
//                         structure);
//   Undetermined          everything else; resonant chains can still be
//                         Benford, so no claim is made either way.
ComponentVerdict component_verdict(const SpectralDecomposition& dec,
                                   const ResonanceVerdict& resonance, int i,
                                   int j, SeriesKind kind);

enum class ClassicSequence { pow2, factorial, fibonacci };

// log10 of the classic test sequences, n = 1..N: 2^n as n*log10 2, n! by
// compensated summation of log10 k, Fibonacci exactly from 64-bit integers
// up to n = 90 and in closed form beyond. N <= 1e6.
std::vector<double> classic_sequence_logs(ClassicSequence kind, long N);

}  // namespace benford
