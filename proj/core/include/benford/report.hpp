#pragma once

#include <optional>
#include <string>
#include <vector>

#include "benford/randomchain.hpp"
#include "benford/sequences.hpp"

namespace benford {

// Reports must be byte-identical across runs and platforms, so floats are
// printed with 17 significant digits (%.17g round-trips every double) by a
// small ordered writer instead of a general JSON library.
std::string format_double17(double v);

class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(double v);
  JsonWriter& value(long long v);
  JsonWriter& value(int v);
  JsonWriter& value(unsigned long long v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& s);
  JsonWriter& value_raw(const std::string& raw);
  JsonWriter& null_value();
  const std::string& str() const { return out_; }

 private:
  void pre_value();
  std::string out_;
  std::vector<bool> needs_comma_;
  bool pending_key_ = false;
};

struct AnalysisOptions {
  long long Qmax = 100;
  double eps = 1e-10;
  long empirical_N = 0;  // 0 = skip empirical digit tables
};

struct ComponentSummary {
  int i = 0, j = 0;  // 0-based
  ComponentVerdict verdict = ComponentVerdict::Undetermined;
};

struct EmpiricalComponent {
  int i = 0, j = 0;
  DigitFrequencyTable table;
  double chi_squared = 0;
  double discrepancy = 0;
  long long zero_entries = 0;
};

struct AnalysisReport {
  Eigen::MatrixXd input;  // renormalized entries
  ChainClassification classification;
  bool gate_ok = false;
  std::string gate_error;  // "NotIrreducible" / "NotAperiodic" when !gate_ok

  std::optional<EigenStructure> eig;
  bool simple_spectrum = false;
  std::optional<ResonanceVerdict> verdict;
  // Column-major component order: (1,1), (2,1), ..., (1,2), ...
  std::vector<ComponentSummary> verdicts_pstar;
  std::vector<ComponentSummary> verdicts_diff;
  long empirical_N = 0;
  std::vector<EmpiricalComponent> empirical_pstar;
  std::vector<EmpiricalComponent> empirical_diff;
};

AnalysisReport analyze_chain(const StochasticMatrix& P,
                             const AnalysisOptions& opt = {});

// schema "benford-chain/1".
std::string analysis_report_json(const AnalysisReport& r);
std::string sample_report_json(const ChainSampleReport& r);
std::string sample_report_csv(const ChainSampleReport& r);

const char* verdict_name(ComponentVerdict v);
const char* status_name(ResonanceVerdict::Status s);
const char* certificate_kind_name(ResonanceCertificate::Kind k);

// Digit-frequency CSV in the d^2-column layout: digit, one column per
// component in column-major order, then the first-digit law. decimals < 0
// prints full precision; otherwise frequencies are rounded to the given
// places (3 at N=1000, 4 at N=10000 print style).
std::string frequency_table_csv(const std::vector<DigitFrequencyTable>& tables,
                                const std::vector<std::string>& headers,
                                int decimals);
int print_decimals_for(long N);  // N >= 10000 ? 4 : 3

// Single-sequence variant: digit, frequency, benford.
std::string sequence_frequency_csv(const DigitFrequencyTable& table,
                                   int decimals);

// Component series CSV: n, log10_abs, is_zero, significand, D1.
std::string series_csv(const LogSignificandSeries& s);

// Parsers for the CSVs above (round-trip checks).
struct ParsedFrequencyCsv {
  std::vector<std::string> headers;
  std::vector<std::vector<double>> columns;  // per header, 9 rows
};
ParsedFrequencyCsv parse_frequency_csv(const std::string& text);
struct ParsedSeriesRow {
  long n;
  double log10_abs;
  bool is_zero;
  double significand;
  int d1;
};
std::vector<ParsedSeriesRow> parse_series_csv(const std::string& text);

// Exit codes shared by the CLI and tests.
inline constexpr int kExitNonresonant = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitResonant = 2;
inline constexpr int kExitNotErgodic = 3;

int exit_code_for(const AnalysisReport& r);

}  // namespace benford
