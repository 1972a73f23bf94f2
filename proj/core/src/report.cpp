#include "benford/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "benford/spectral.hpp"

namespace benford {

std::string format_double17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char ch : s) {
    switch (ch) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

}  // namespace

JsonWriter& JsonWriter::begin_object() {
  pre_value();
  out_ += '{';
  needs_comma_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  needs_comma_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  pre_value();
  out_ += '[';
  needs_comma_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  needs_comma_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
  if (!needs_comma_.empty()) {
    if (needs_comma_.back()) out_ += ',';
    needs_comma_.back() = true;
  }
  out_ += '"';
  out_ += json_escape(k);
  out_ += "\":";
  pending_key_ = true;
  return *this;
}

void JsonWriter::pre_value() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!needs_comma_.empty()) {
    if (needs_comma_.back()) out_ += ',';
    needs_comma_.back() = true;
  }
}

JsonWriter& JsonWriter::value(double v) {
  pre_value();
  out_ += std::isfinite(v) ? format_double17(v) : "null";
  return *this;
}

JsonWriter& JsonWriter::value(long long v) {
  pre_value();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(int v) { return value(static_cast<long long>(v)); }

JsonWriter& JsonWriter::value(unsigned long long v) {
  pre_value();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  pre_value();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& s) {
  pre_value();
  out_ += '"';
  out_ += json_escape(s);
  out_ += '"';
  return *this;
}

JsonWriter& JsonWriter::value_raw(const std::string& raw) {
  pre_value();
  out_ += raw;
  return *this;
}

JsonWriter& JsonWriter::null_value() {
  pre_value();
  out_ += "null";
  return *this;
}

const char* verdict_name(ComponentVerdict v) {
  switch (v) {
    case ComponentVerdict::BenfordPredicted:
      return "BenfordPredicted";
    case ComponentVerdict::EventuallyZero:
      return "EventuallyZero";
    case ComponentVerdict::NonBenfordRationalLog:
      return "NonBenfordRationalLog";
    case ComponentVerdict::NonBenfordResonant:
      return "NonBenfordResonant";
    case ComponentVerdict::Undetermined:
      return "Undetermined";
  }
  return "?";
}

const char* status_name(ResonanceVerdict::Status s) {
  switch (s) {
    case ResonanceVerdict::Status::nonresonant:
      return "nonresonant";
    case ResonanceVerdict::Status::resonant:
      return "resonant";
    case ResonanceVerdict::Status::undecided:
      return "undecided";
  }
  return "?";
}

const char* certificate_kind_name(ResonanceCertificate::Kind k) {
  switch (k) {
    case ResonanceCertificate::Kind::relation:
      return "relation";
    case ResonanceCertificate::Kind::real_pair:
      return "real_pair";
    case ResonanceCertificate::Kind::rational_log:
      return "rational_log";
    case ResonanceCertificate::Kind::singular:
      return "singular";
    case ResonanceCertificate::Kind::search_exhausted:
      return "search_exhausted";
  }
  return "?";
}

namespace {

EmpiricalComponent empirical_from_series(const LogSignificandSeries& s) {
  EmpiricalComponent e;
  e.i = s.i;
  e.j = s.j;
  std::vector<double> fracs;
  fracs.reserve(s.entries.size());
  for (const LogEntry& le : s.entries) {
    if (le.is_zero) {
      ++e.zero_entries;
      continue;
    }
    e.table.add(first_digit_from_frac(le.frac_log10));
    fracs.push_back(le.frac_log10);
  }
  if (e.table.total > 0) {
    e.chi_squared = gof(e.table).chi_squared;
    e.discrepancy = discrepancy(fracs);
  }
  return e;
}

}  // namespace

AnalysisReport analyze_chain(const StochasticMatrix& P,
                             const AnalysisOptions& opt) {
  AnalysisReport r;
  r.input = P.entries();
  r.classification = classify(P);
  r.gate_ok = r.classification.unichain() && r.classification.aperiodic();
  if (!r.gate_ok) {
    r.gate_error =
        r.classification.unichain() ? "NotAperiodic" : "NotIrreducible";
    return r;
  }
  r.eig = eigen_decompose(P);
  r.simple_spectrum = r.eig->all_simple();
  r.verdict = nonresonance_verdict(P, *r.eig, opt.Qmax, opt.eps);
  const int d = P.d();

  if (r.simple_spectrum) {
    SpectralDecomposition dec = spectral_projectors(P, *r.eig);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) {
        r.verdicts_pstar.push_back(
            {i, j,
             component_verdict(dec, *r.verdict, i, j,
                               SeriesKind::pn_minus_pstar)});
        r.verdicts_diff.push_back(
            {i, j,
             component_verdict(dec, *r.verdict, i, j,
                               SeriesKind::successive_diff)});
      }
    if (opt.empirical_N > 0) {
      r.empirical_N = opt.empirical_N;
      for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
          r.empirical_pstar.push_back(empirical_from_series(
              component_log_series(dec, i, j, SeriesKind::pn_minus_pstar,
                                   opt.empirical_N)));
          r.empirical_diff.push_back(empirical_from_series(
              component_log_series(dec, i, j, SeriesKind::successive_diff,
                                   opt.empirical_N)));
        }
    }
  } else {
    // Repeated eigenvalues: no per-component spectral claims, only the
    // chain-level one. The extended-precision path still produces empirical
    // tables on request.
    ComponentVerdict v =
        r.verdict->status == ResonanceVerdict::Status::nonresonant
            ? ComponentVerdict::BenfordPredicted
            : ComponentVerdict::Undetermined;
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) {
        r.verdicts_pstar.push_back({i, j, v});
        r.verdicts_diff.push_back({i, j, v});
      }
    if (opt.empirical_N > 0) {
      r.empirical_N = opt.empirical_N;
      auto all_pstar =
          fallback_log_series_all(P, SeriesKind::pn_minus_pstar,
                                  opt.empirical_N);
      auto all_diff = fallback_log_series_all(P, SeriesKind::successive_diff,
                                              opt.empirical_N);
      for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
          r.empirical_pstar.push_back(
              empirical_from_series(all_pstar[static_cast<size_t>(i) * d + j]));
          r.empirical_diff.push_back(
              empirical_from_series(all_diff[static_cast<size_t>(i) * d + j]));
        }
    }
  }
  return r;
}

namespace {

void write_matrix(JsonWriter& w, const Eigen::MatrixXd& m) {
  w.begin_object();
  w.key("d").value(static_cast<int>(m.rows()));
  w.key("rows").begin_array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    w.begin_array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) w.value(m(i, j));
    w.end_array();
  }
  w.end_array();
  w.end_object();
}

void write_certificate(JsonWriter& w, const ResonanceCertificate& c) {
  w.begin_object();
  w.key("kind").value(std::string(certificate_kind_name(c.kind)));
  w.key("Qmax").value(c.Qmax);
  w.key("eps").value(c.eps);
  switch (c.kind) {
    case ResonanceCertificate::Kind::relation:
      w.key("class_L0").value(c.class_L0);
      w.key("relation").begin_array();
      for (long long q : c.relation) w.value(q);
      w.end_array();
      w.key("xs").begin_array();
      for (double x : c.relation_xs) w.value(x);
      w.end_array();
      w.key("residual").value(c.residual);
      break;
    case ResonanceCertificate::Kind::real_pair:
      w.key("class_L0").value(c.class_L0);
      w.key("pair_a").begin_object();
      w.key("re").value(c.pair_a.real());
      w.key("im").value(c.pair_a.imag());
      w.end_object();
      w.key("pair_b").begin_object();
      w.key("re").value(c.pair_b.real());
      w.key("im").value(c.pair_b.imag());
      w.end_object();
      break;
    case ResonanceCertificate::Kind::rational_log:
      w.key("class_L0").value(c.class_L0);
      w.key("p").value(c.p);
      w.key("q").value(c.q);
      w.key("rational_err").value(c.rational_err);
      break;
    case ResonanceCertificate::Kind::singular:
      w.key("eigenvalue").begin_object();
      w.key("re").value(c.singular_eigenvalue.real());
      w.key("im").value(c.singular_eigenvalue.imag());
      w.end_object();
      break;
    case ResonanceCertificate::Kind::search_exhausted:
      break;
  }
  w.end_object();
}

void write_component_verdicts(JsonWriter& w,
                              const std::vector<ComponentSummary>& v) {
  w.begin_array();
  for (const auto& c : v) {
    w.begin_object();
    w.key("i").value(c.i + 1);
    w.key("j").value(c.j + 1);
    w.key("verdict").value(std::string(verdict_name(c.verdict)));
    w.end_object();
  }
  w.end_array();
}

void write_empirical(JsonWriter& w, const std::vector<EmpiricalComponent>& v) {
  w.begin_array();
  for (const auto& e : v) {
    w.begin_object();
    w.key("i").value(e.i + 1);
    w.key("j").value(e.j + 1);
    w.key("counts").begin_array();
    for (long long c : e.table.counts) w.value(c);
    w.end_array();
    w.key("total").value(e.table.total);
    w.key("chi_squared").value(e.chi_squared);
    w.key("discrepancy").value(e.discrepancy);
    w.key("zero_entries").value(e.zero_entries);
    w.end_object();
  }
  w.end_array();
}

}  // namespace

std::string analysis_report_json(const AnalysisReport& r) {
  JsonWriter w;
  w.begin_object();
  w.key("schema").value(std::string("benford-chain/1"));
  w.key("d").value(static_cast<int>(r.input.rows()));
  w.key("input");
  write_matrix(w, r.input);
  w.key("classification").begin_object();
  w.key("irreducible").value(r.classification.irreducible);
  w.key("unichain").value(r.classification.unichain());
  w.key("period").value(r.classification.period);
  w.key("aperiodic").value(r.classification.aperiodic());
  w.key("strongly_connected_components").begin_array();
  for (const auto& comp : r.classification.strongly_connected_components) {
    w.begin_array();
    for (int s : comp) w.value(s + 1);
    w.end_array();
  }
  w.end_array();
  w.key("recurrent_classes").begin_array();
  for (int c : r.classification.recurrent_classes) w.value(c);
  w.end_array();
  w.end_object();
  w.key("gate_ok").value(r.gate_ok);
  if (!r.gate_ok) {
    w.key("gate_error").value(r.gate_error);
    w.end_object();
    return w.str();
  }
  w.key("eigenvalues").begin_array();
  const auto& eig = *r.eig;
  for (Eigen::Index l = 0; l < eig.eigenvalues.size(); ++l) {
    w.begin_object();
    w.key("re").value(eig.eigenvalues[l].real());
    w.key("im").value(eig.eigenvalues[l].imag());
    w.key("modulus").value(std::abs(eig.eigenvalues[l]));
    w.key("simple").value(static_cast<bool>(eig.simple[static_cast<size_t>(l)]));
    w.key("residual").value(eig.residuals[l]);
    w.end_object();
  }
  w.end_array();
  w.key("simple_spectrum").value(r.simple_spectrum);
  w.key("resonance").begin_object();
  w.key("status").value(std::string(status_name(r.verdict->status)));
  w.key("certificate");
  write_certificate(w, r.verdict->certificate);
  w.end_object();
  w.key("component_verdicts").begin_object();
  w.key("pn_minus_pstar");
  write_component_verdicts(w, r.verdicts_pstar);
  w.key("successive_diff");
  write_component_verdicts(w, r.verdicts_diff);
  w.end_object();
  if (r.empirical_N > 0) {
    w.key("empirical").begin_object();
    w.key("N").value(static_cast<long long>(r.empirical_N));
    w.key("pn_minus_pstar");
    write_empirical(w, r.empirical_pstar);
    w.key("successive_diff");
    write_empirical(w, r.empirical_diff);
    w.end_object();
  }
  w.end_object();
  return w.str();
}

std::string sample_report_json(const ChainSampleReport& r) {
  JsonWriter w;
  w.begin_object();
  w.key("schema").value(std::string("benford-chain/1"));
  w.key("kind").value(std::string("sample-experiment"));
  w.key("d").value(r.d);
  w.key("count").value(r.count);
  w.key("seed").value(static_cast<unsigned long long>(r.seed));
  w.key("N").value(r.N);
  w.key("Qmax").value(r.Qmax);
  w.key("eps").value(r.eps);
  w.key("fraction_nonresonant").value(r.fraction_nonresonant);
  w.key("fraction_components_pass").value(r.fraction_components_pass);
  w.key("evaluated_count").value(r.evaluated_count);
  w.key("samples").begin_array();
  for (const auto& s : r.samples) {
    w.begin_object();
    w.key("index").value(s.index);
    w.key("gate_ok").value(s.gate_ok);
    w.key("status").value(std::string(status_name(s.status)));
    w.key("simple_spectrum").value(s.simple_spectrum);
    w.key("chi2_evaluated").value(s.chi2_evaluated);
    w.key("all_pass").value(s.all_pass);
    w.key("chi2").begin_array();
    for (double c : s.chi2) w.value(c);
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

std::string sample_report_csv(const ChainSampleReport& r) {
  std::ostringstream out;
  out << "index,gate_ok,status,simple_spectrum,chi2_evaluated,all_pass";
  for (int j = 0; j < r.d; ++j)
    for (int i = 0; i < r.d; ++i)
      out << ",chi2(" << i + 1 << ";" << j + 1 << ")";
  out << '\n';
  for (const auto& s : r.samples) {
    out << s.index << ',' << (s.gate_ok ? 1 : 0) << ',' << status_name(s.status)
        << ',' << (s.simple_spectrum ? 1 : 0) << ','
        << (s.chi2_evaluated ? 1 : 0) << ',' << (s.all_pass ? 1 : 0);
    for (int k = 0; k < r.d * r.d; ++k) {
      out << ',';
      if (s.chi2_evaluated) out << format_double17(s.chi2[static_cast<size_t>(k)]);
    }
    out << '\n';
  }
  return out.str();
}

namespace {

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

}  // namespace

std::string frequency_table_csv(const std::vector<DigitFrequencyTable>& tables,
                                const std::vector<std::string>& headers,
                                int decimals) {
  if (tables.size() != headers.size())
    throw std::invalid_argument("one header per table");
  std::ostringstream out;
  out << "digit";
  for (const auto& h : headers) out << ',' << h;
  out << ",benford\n";
  for (int d1 = 1; d1 <= 9; ++d1) {
    out << d1;
    for (const auto& t : tables) {
      double f = t.total > 0 ? t.frequency(d1) : 0.0;
      out << ','
          << (decimals < 0 ? format_double17(f) : format_fixed(f, decimals));
    }
    double b = benford_pmf_first(d1);
    out << ','
        << (decimals < 0 ? format_double17(b) : format_fixed(b, 5));
    out << '\n';
  }
  return out.str();
}

int print_decimals_for(long N) { return N >= 10000 ? 4 : 3; }

std::string sequence_frequency_csv(const DigitFrequencyTable& table,
                                   int decimals) {
  return frequency_table_csv({table}, {"frequency"}, decimals);
}

std::string series_csv(const LogSignificandSeries& s) {
  std::ostringstream out;
  out << "n,log10_abs,is_zero,significand,D1\n";
  for (const LogEntry& e : s.entries) {
    out << e.n << ',';
    if (e.is_zero) {
      out << ",1,,0\n";
    } else {
      out << format_double17(e.log10_abs) << ",0,"
          << format_double17(significand_from_log(e.frac_log10)) << ','
          << first_digit_from_frac(e.frac_log10) << '\n';
    }
  }
  return out.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_field(const std::string& s) {
  if (s.empty()) return 0.0;
  size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw ParseError("bad numeric field: " + s);
  return v;
}

}  // namespace

ParsedFrequencyCsv parse_frequency_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  ParsedFrequencyCsv out;
  bool header_done = false;
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (!header_done) {
      if (fields.empty() || fields[0] != "digit")
        throw ParseError("expected digit header");
      for (size_t k = 1; k < fields.size(); ++k) {
        out.headers.push_back(fields[k]);
        out.columns.emplace_back();
      }
      header_done = true;
      continue;
    }
    ++row;
    if (fields.size() != out.headers.size() + 1)
      throw ParseError("row width mismatch");
    if (parse_field(fields[0]) != row) throw ParseError("digit rows must be 1..9");
    for (size_t k = 1; k < fields.size(); ++k)
      out.columns[k - 1].push_back(parse_field(fields[k]));
  }
  if (!header_done || row != 9) throw ParseError("expected 9 digit rows");
  return out;
}

std::vector<ParsedSeriesRow> parse_series_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<ParsedSeriesRow> out;
  bool header_done = false;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (!header_done) {
      if (fields.size() != 5 || fields[0] != "n")
        throw ParseError("expected series header n,log10_abs,is_zero,significand,D1");
      header_done = true;
      continue;
    }
    if (fields.size() != 5) throw ParseError("row width mismatch");
    ParsedSeriesRow r;
    r.n = static_cast<long>(parse_field(fields[0]));
    r.log10_abs = parse_field(fields[1]);
    r.is_zero = parse_field(fields[2]) != 0;
    r.significand = parse_field(fields[3]);
    r.d1 = static_cast<int>(parse_field(fields[4]));
    out.push_back(r);
  }
  if (!header_done) throw ParseError("missing header");
  return out;
}

int exit_code_for(const AnalysisReport& r) {
  if (!r.gate_ok) return kExitNotErgodic;
  if (!r.verdict) return kExitError;
  switch (r.verdict->status) {
    case ResonanceVerdict::Status::nonresonant:
      return kExitNonresonant;
    case ResonanceVerdict::Status::resonant:
      return kExitResonant;
    case ResonanceVerdict::Status::undecided:
      return kExitError;
  }
  return kExitError;
}

}  // namespace benford
