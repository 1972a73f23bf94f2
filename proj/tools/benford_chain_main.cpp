// benford_chain: analyze finite-state chains for first-digit behavior.
//
// Exit codes: 0 nonresonant, 2 resonant, 3 not unichain/aperiodic,
// 1 I/O, numeric, or undecided. Output is byte-identical across reruns for
// identical inputs, flags and seed.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "benford/chains.hpp"
#include "benford/contfrac.hpp"
#include "benford/errors.hpp"
#include "benford/randomchain.hpp"
#include "benford/report.hpp"
#include "benford/sequences.hpp"
#include "benford/significand.hpp"
#include "benford/spectral.hpp"

namespace {

using namespace benford;

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw Error("cannot open output file: " + out_path);
  f << text;
  if (!f) throw Error("write failed: " + out_path);
}

std::string component_header(int i, int j) {
  std::ostringstream s;
  s << '(' << i + 1 << ';' << j + 1 << ')';
  return s.str();
}

DigitFrequencyTable tally_series(const LogSignificandSeries& s) {
  DigitFrequencyTable t;
  for (const LogEntry& e : s.entries)
    if (!e.is_zero) t.add(first_digit_from_frac(e.frac_log10));
  return t;
}

SeriesKind parse_kind(const std::string& s) {
  if (s == "pn-minus-pstar") return SeriesKind::pn_minus_pstar;
  if (s == "successive-diff") return SeriesKind::successive_diff;
  throw Error("unknown --kind: " + s);
}

std::string analysis_report_text(const AnalysisReport& r) {
  std::ostringstream out;
  out << "d: " << r.input.rows() << '\n';
  out << "irreducible: " << (r.classification.irreducible ? "yes" : "no")
      << '\n';
  out << "period: " << r.classification.period << '\n';
  out << "recurrent classes: " << r.classification.recurrent_classes.size()
      << '\n';
  if (!r.gate_ok) {
    out << "gate: refused (" << r.gate_error << ")\n";
    out << "strongly connected components:";
    for (const auto& scc : r.classification.strongly_connected_components) {
      out << " {";
      for (size_t k = 0; k < scc.size(); ++k)
        out << (k ? "," : "") << scc[k] + 1;
      out << '}';
    }
    out << '\n';
    return out.str();
  }
  out << "gate: ok\n";
  const auto& eig = *r.eig;
  out << "eigenvalues (modulus desc):\n";
  for (Eigen::Index l = 0; l < eig.eigenvalues.size(); ++l) {
    out << "  " << l + 1 << ": " << format_double17(eig.eigenvalues[l].real())
        << (eig.eigenvalues[l].imag() < 0 ? " - " : " + ")
        << format_double17(std::abs(eig.eigenvalues[l].imag())) << "i  |.| = "
        << format_double17(std::abs(eig.eigenvalues[l]))
        << (eig.simple[static_cast<size_t>(l)] ? "" : "  [repeated]") << '\n';
  }
  out << "simple spectrum: " << (r.simple_spectrum ? "yes" : "no") << '\n';
  const auto& v = *r.verdict;
  out << "resonance: " << status_name(v.status) << '\n';
  out << "certificate: " << certificate_kind_name(v.certificate.kind)
      << " (Qmax=" << v.certificate.Qmax
      << ", eps=" << format_double17(v.certificate.eps) << ")\n";
  switch (v.certificate.kind) {
    case ResonanceCertificate::Kind::relation: {
      out << "  relation:";
      for (long long q : v.certificate.relation) out << ' ' << q;
      out << "  residual " << format_double17(v.certificate.residual) << '\n';
      break;
    }
    case ResonanceCertificate::Kind::real_pair:
      out << "  real pair: " << format_double17(v.certificate.pair_a.real())
          << ", " << format_double17(v.certificate.pair_b.real()) << '\n';
      break;
    case ResonanceCertificate::Kind::rational_log:
      out << "  log10 L = " << v.certificate.p << "/" << v.certificate.q
          << " (err " << format_double17(v.certificate.rational_err) << ")\n";
      break;
    case ResonanceCertificate::Kind::singular:
      out << "  eigenvalue at zero (modulus <= 1e-12)\n";
      break;
    case ResonanceCertificate::Kind::search_exhausted:
      break;
  }
  auto dump = [&](const char* name, const std::vector<ComponentSummary>& vs) {
    out << name << ":\n";
    for (const auto& c : vs)
      out << "  (" << c.i + 1 << ',' << c.j + 1
          << "): " << verdict_name(c.verdict) << '\n';
  };
  dump("component verdicts P^n - P*", r.verdicts_pstar);
  dump("component verdicts P^(n+1) - P^n", r.verdicts_diff);
  if (r.empirical_N > 0) {
    auto dump_emp = [&](const char* name,
                        const std::vector<EmpiricalComponent>& es) {
      out << name << " (N=" << r.empirical_N << "):\n";
      for (const auto& e : es) {
        out << "  (" << e.i + 1 << ',' << e.j + 1
            << "): chi2=" << format_double17(e.chi_squared)
            << " disc=" << format_double17(e.discrepancy)
            << " zeros=" << e.zero_entries << '\n';
      }
    };
    dump_emp("empirical P^n - P*", r.empirical_pstar);
    dump_emp("empirical P^(n+1) - P^n", r.empirical_diff);
  }
  return out.str();
}

int run_analyze(const std::string& path, bool json, const std::string& out,
                long long qmax, double eps, long empirical_n) {
  StochasticMatrix P = validate_stochastic(parse_matrix_file(path));
  AnalysisOptions opt;
  opt.Qmax = qmax;
  opt.eps = eps;
  opt.empirical_N = empirical_n;
  AnalysisReport r = analyze_chain(P, opt);
  emit(out, json ? analysis_report_json(r) + "\n" : analysis_report_text(r));
  return exit_code_for(r);
}

int run_simulate(const std::string& path, long n, const std::string& kind_s,
                 const std::string& out, bool full_precision) {
  StochasticMatrix P = validate_stochastic(parse_matrix_file(path));
  require_unichain_aperiodic(P);
  SeriesKind kind = parse_kind(kind_s);
  const int d = P.d();
  std::vector<DigitFrequencyTable> tables;
  std::vector<std::string> headers;
  EigenStructure eig = eigen_decompose(P);
  if (eig.all_simple()) {
    SpectralDecomposition dec = spectral_projectors(P, eig);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) {
        tables.push_back(tally_component_first_digits(dec, i, j, kind, n));
        headers.push_back(component_header(i, j));
      }
  } else {
    auto all = fallback_log_series_all(P, kind, n);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) {
        tables.push_back(tally_series(all[static_cast<size_t>(i) * d + j]));
        headers.push_back(component_header(i, j));
      }
  }
  emit(out, frequency_table_csv(tables, headers,
                                full_precision ? -1 : print_decimals_for(n)));
  return 0;
}

int run_series(const std::string& path, int i, int j, long n,
               const std::string& kind_s, const std::string& out) {
  StochasticMatrix P = validate_stochastic(parse_matrix_file(path));
  require_unichain_aperiodic(P);
  SeriesKind kind = parse_kind(kind_s);
  if (i < 1 || i > P.d() || j < 1 || j > P.d())
    throw Error("component indices are 1-based and must be <= d");
  EigenStructure eig = eigen_decompose(P);
  LogSignificandSeries s =
      eig.all_simple()
          ? component_log_series(spectral_projectors(P, eig), i - 1, j - 1,
                                 kind, n)
          : fallback_log_series(P, i - 1, j - 1, kind, n);
  emit(out, series_csv(s));
  return 0;
}

int run_seqdigits(const std::string& kind_s, long n, const std::string& out,
                  bool full_precision) {
  ClassicSequence kind;
  if (kind_s == "pow2")
    kind = ClassicSequence::pow2;
  else if (kind_s == "factorial")
    kind = ClassicSequence::factorial;
  else if (kind_s == "fibonacci")
    kind = ClassicSequence::fibonacci;
  else
    throw Error("unknown --kind: " + kind_s);
  DigitFrequencyTable t;
  for (double lg : classic_sequence_logs(kind, n))
    t.add(first_digit_from_frac(frac1(lg)));
  emit(out, sequence_frequency_csv(t, full_precision ? -1
                                                     : print_decimals_for(n)));
  return 0;
}

int run_sample(int d, long long count, long long n, std::uint64_t seed,
               long long qmax, double eps, const std::string& out,
               const std::string& per_sample_csv) {
  ChainSampleReport r = random_chain_experiment(d, count, n, seed, qmax, eps);
  if (!per_sample_csv.empty()) emit(per_sample_csv, sample_report_csv(r));
  emit(out, sample_report_json(r) + "\n");
  return 0;
}

int run_contfrac(double value, bool have_value, const std::string& expr,
                 int terms, bool json, const std::string& out) {
  ContinuedFraction cf;
  std::string label;
  if (have_value) {
    cf = expand(value, terms);
    label = format_double17(value);
  } else {
    auto c = constant_by_name(expr);
    if (!c) {
      std::string names;
      for (NamedConstant k : all_named_constants())
        names += std::string(" ") + constant_name(k);
      throw Error("unknown --expr " + expr + "; known:" + names);
    }
    cf = expand_constant(*c, terms);
    label = expr;
  }
  auto cs = convergents(cf);
  IrrationalityProfile prof = profile_of(cf);
  std::ostringstream s;
  if (json) {
    JsonWriter w;
    w.begin_object();
    w.key("schema").value(std::string("benford-chain/1"));
    w.key("kind").value(std::string("contfrac"));
    w.key("expr").value(label);
    w.key("value").value(cf.source_value);
    w.key("a0").value(cf.a0);
    w.key("quotients").begin_array();
    for (long long a : cf.partial_quotients) w.value(a);
    w.end_array();
    w.key("certified_terms").value(cf.precision_note);
    w.key("convergents").begin_array();
    for (const auto& c : cs) {
      w.begin_object();
      std::ostringstream ps, qs;
      ps << c.p;
      qs << c.q;
      w.key("p").value(ps.str());
      w.key("q").value(qs.str());
      w.end_object();
    }
    w.end_array();
    w.key("profile").begin_object();
    w.key("max_quotient").value(prof.max_quotient);
    w.key("index_of_max").value(prof.index_of_max);
    w.key("geometric_mean_quotient").value(prof.geometric_mean_quotient);
    w.end_object();
    w.end_object();
    s << w.str() << '\n';
  } else {
    s << "x = " << label << " = " << format_double17(cf.source_value) << '\n';
    s << "[" << cf.a0;
    for (size_t k = 0; k < cf.partial_quotients.size(); ++k)
      s << (k ? ", " : "; ") << cf.partial_quotients[k];
    s << "]\n";
    s << "certified terms: " << cf.precision_note << '\n';
    s << "convergents:\n";
    for (const auto& c : cs) s << "  " << c.p << "/" << c.q << '\n';
    s << "profile: max quotient " << prof.max_quotient << " at index "
      << prof.index_of_max << ", geometric mean "
      << format_double17(prof.geometric_mean_quotient) << '\n';
  }
  emit(out, s.str());
  return 0;
}

// Estimates the transition matrix by maximum likelihood, runs the standard
// pipeline on the estimate, and pools a first-digit GOF over the entries of
// the lag-difference estimates. A pass is NOT evidence of Markov behavior;
// only a gross failure under a nonresonant estimate is reported as suspect.
int run_detect(const std::string& path, int d, long lag_cap, bool json,
               const std::string& out) {
  if (d < 2) throw Error("--states must be >= 2");
  std::ifstream f(path);
  if (!f) throw Error("cannot open sequence file: " + path);
  std::vector<int> xs;
  long long v;
  while (f >> v) {
    if (v < 1 || v > d)
      throw UnknownStateLabel("state label out of range 1.." +
                              std::to_string(d) + ": " + std::to_string(v));
    xs.push_back(static_cast<int>(v) - 1);
  }
  const long long T = static_cast<long long>(xs.size());
  if (T < 100LL * d * d)
    throw TooShort("need at least " + std::to_string(100LL * d * d) +
                   " observations, got " + std::to_string(T));

  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(d, d);
  for (size_t t = 0; t + 1 < xs.size(); ++t) counts(xs[t], xs[t + 1]) += 1.0;
  for (int i = 0; i < d; ++i)
    if (counts.row(i).sum() == 0.0)
      throw Error("state " + std::to_string(i + 1) +
                  " never observed with a successor; cannot estimate a row");
  Eigen::MatrixXd phat = counts;
  for (int i = 0; i < d; ++i) phat.row(i) /= counts.row(i).sum();

  StochasticMatrix P = validate_stochastic(phat);
  AnalysisReport rep = analyze_chain(P, {});

  // Lag-n pair-frequency estimates of P^n; entries of successive differences
  // feed a pooled first-digit table. Entries below the sampling noise floor
  // 2/sqrt(T) carry no digit information and are excluded.
  long L = std::min<long>(lag_cap, 30);
  if (L < 1) L = 1;
  while (T - (L + 1) < 10 && L > 1) --L;
  double noise = 2.0 / std::sqrt(static_cast<double>(T));
  auto lag_matrix = [&](long n) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d, d);
    for (long long t = 0; t + n < T; ++t) c(xs[static_cast<size_t>(t)],
                                            xs[static_cast<size_t>(t + n)]) += 1.0;
    for (int i = 0; i < d; ++i) {
      double s = c.row(i).sum();
      if (s > 0) c.row(i) /= s;
    }
    return c;
  };
  DigitFrequencyTable pooled;
  long long kept = 0;
  Eigen::MatrixXd prev = lag_matrix(1);
  for (long n = 1; n <= L; ++n) {
    Eigen::MatrixXd next = lag_matrix(n + 1);
    Eigen::MatrixXd diff = next - prev;
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) {
        double x = std::abs(diff(i, j));
        if (x > noise) {
          pooled.add(first_digit_from_frac(frac1(std::log10(x))));
          ++kept;
        }
      }
    prev = next;
  }
  double chi2 = pooled.total > 0 ? gof(pooled).chi_squared : 0.0;
  bool nonres = rep.gate_ok && rep.verdict &&
                rep.verdict->status == ResonanceVerdict::Status::nonresonant;
  // "Grossly fails" needs a sample the chi^2 approximation is valid on:
  // expected count >= 5 in the rarest bin, i.e. >= ~45 pooled digits. Below
  // that the pool is noise and no flag is raised.
  bool suspect =
      nonres && pooled.total >= 45 && chi2 > 2.0 * kChi2Crit01;

  std::ostringstream s;
  if (json) {
    JsonWriter w;
    w.begin_object();
    w.key("schema").value(std::string("benford-chain/1"));
    w.key("kind").value(std::string("detect"));
    w.key("T").value(T);
    w.key("d").value(d);
    w.key("estimated_matrix");
    {
      w.begin_array();
      for (int i = 0; i < d; ++i) {
        w.begin_array();
        for (int j = 0; j < d; ++j) w.value(P(i, j));
        w.end_array();
      }
      w.end_array();
    }
    w.key("gate_ok").value(rep.gate_ok);
    if (!rep.gate_ok) {
      w.key("gate_error").value(rep.gate_error);
      w.key("period").value(rep.classification.period);
    } else {
      w.key("resonance")
          .value(std::string(status_name(rep.verdict->status)));
    }
    w.key("lags").value(static_cast<long long>(L));
    w.key("noise_floor").value(noise);
    w.key("components_kept").value(kept);
    w.key("pooled_chi_squared").value(chi2);
    w.key("non_markov_suspect").value(suspect);
    w.key("note").value(std::string(
        "partial test: a pass is not evidence of Markov behavior"));
    w.end_object();
    s << w.str() << '\n';
  } else {
    s << "observations: " << T << "\nstates: " << d << '\n';
    s << "estimated transition matrix (maximum likelihood):\n";
    for (int i = 0; i < d; ++i) {
      s << " ";
      for (int j = 0; j < d; ++j) s << ' ' << format_double17(P(i, j));
      s << '\n';
    }
    if (!rep.gate_ok) {
      s << "pipeline: refused (" << rep.gate_error
        << ", period=" << rep.classification.period << ")\n";
    } else {
      s << "pipeline: " << status_name(rep.verdict->status) << '\n';
      s << "lag differences: lags 1.." << L << ", noise floor "
        << format_double17(noise) << ", components kept " << kept << '\n';
      s << "pooled first-digit chi^2: " << format_double17(chi2)
        << " over " << pooled.total
        << " digits (critical 20.090 at alpha=0.01; flag needs >= 45)\n";
      s << (suspect
                ? "verdict: NON-MARKOV-SUSPECT (difference digits grossly "
                  "off despite nonresonant estimate)\n"
                : "verdict: no violation detected; this partial test cannot "
                  "certify Markov behavior\n");
    }
  }
  emit(out, s.str());
  return exit_code_for(rep);
}

int fail(bool json, const std::string& kind, const std::string& what,
         int code) {
  if (json) {
    JsonWriter w;
    w.begin_object();
    w.key("schema").value(std::string("benford-chain/1"));
    w.key("error").value(kind);
    w.key("message").value(what);
    w.end_object();
    std::cout << w.str() << '\n';
  } else {
    std::cerr << (code == kExitNotErgodic ? "refused: " : "error: ") << what
              << '\n';
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"first-digit analysis of finite-state Markov chains"};
  app.require_subcommand(1);

  std::string matrix_path, out_path, kind, expr, seq_path;
  bool json = false, full_precision = false;
  long long qmax = 100;
  double eps = 1e-10;
  long empirical_n = 0, n_terms = 1000;
  int comp_i = 1, comp_j = 1, states = 2, cf_terms = 50;
  int sample_d = 3;
  long long sample_count = 100, sample_n = 10000;
  std::uint64_t seed = 1;
  std::string per_sample_csv;
  double cf_value = 0;

  auto* analyze = app.add_subcommand("analyze", "full pipeline on one matrix");
  analyze->add_option("matrix", matrix_path, "CSV or JSON matrix file")
      ->required();
  analyze->add_flag("--json", json, "machine-readable report");
  analyze->add_option("--out", out_path, "write report to file");
  analyze->add_option("--qmax", qmax, "rational search bound (default 100)");
  analyze->add_option("--eps", eps, "witness tolerance (default 1e-10)");
  analyze->add_option("--empirical", empirical_n,
                      "also tally first digits for N terms");

  auto* simulate = app.add_subcommand(
      "simulate", "digit-frequency table for all d^2 components");
  simulate->add_option("matrix", matrix_path)->required();
  simulate->add_option("--n", n_terms, "number of terms (default 1000)");
  simulate->add_option("--kind", kind,
                       "pn-minus-pstar (default) or successive-diff");
  simulate->add_option("--out", out_path);
  simulate->add_flag("--full-precision", full_precision,
                     "17 significant digits instead of print rounding");

  auto* series = app.add_subcommand(
      "series", "per-term log-significand series of one component");
  series->add_option("matrix", matrix_path)->required();
  series->add_option("--i", comp_i, "row, 1-based")->required();
  series->add_option("--j", comp_j, "column, 1-based")->required();
  series->add_option("--n", n_terms, "number of terms (default 1000)");
  series->add_option("--kind", kind);
  series->add_option("--out", out_path);

  auto* seqdigits =
      app.add_subcommand("seqdigits", "first-digit table of a classic sequence");
  seqdigits->add_option("--kind", kind, "pow2 | factorial | fibonacci")
      ->required();
  seqdigits->add_option("--n", n_terms, "number of terms (default 1000)");
  seqdigits->add_option("--out", out_path);
  seqdigits->add_flag("--full-precision", full_precision);

  auto* sample = app.add_subcommand(
      "sample", "Monte Carlo: random chains, resonance + digit statistics");
  sample->add_option("--d", sample_d, "states per chain (2..6, default 3)");
  sample->add_option("--count", sample_count, "number of chains (default 100)");
  sample->add_option("--n", sample_n, "terms per digit tally (default 10000)");
  sample->add_option("--seed", seed, "RNG seed (default 1)");
  sample->add_option("--qmax", qmax);
  sample->add_option("--eps", eps);
  sample->add_option("--out", out_path);
  sample->add_option("--per-sample-csv", per_sample_csv,
                     "also write one CSV row per sampled chain");

  auto* contfrac =
      app.add_subcommand("contfrac", "continued-fraction expansion");
  auto* vopt = contfrac->add_option("--value", cf_value, "expand this double");
  auto* eopt = contfrac->add_option(
      "--expr", expr, "expand a named constant in extended precision");
  vopt->excludes(eopt);
  contfrac->add_option("--terms", cf_terms, "partial quotients (default 50)");
  contfrac->add_flag("--json", json);
  contfrac->add_option("--out", out_path);

  auto* detect = app.add_subcommand(
      "detect", "screen an observed state sequence for non-Markov behavior");
  detect->add_option("sequence", seq_path,
                     "file of whitespace-separated labels 1..d")
      ->required();
  detect->add_option("--states", states, "number of states d")->required();
  detect->add_option("--n", empirical_n, "max lag (default 30)");
  detect->add_flag("--json", json);
  detect->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze)
      return run_analyze(matrix_path, json, out_path, qmax, eps, empirical_n);
    if (*simulate)
      return run_simulate(matrix_path, n_terms,
                          kind.empty() ? "pn-minus-pstar" : kind, out_path,
                          full_precision);
    if (*series)
      return run_series(matrix_path, comp_i, comp_j, n_terms,
                        kind.empty() ? "pn-minus-pstar" : kind, out_path);
    if (*seqdigits)
      return run_seqdigits(kind, n_terms, out_path, full_precision);
    if (*sample)
      return run_sample(sample_d, sample_count, sample_n, seed, qmax, eps,
                        out_path, per_sample_csv);
    if (*contfrac) {
      if (vopt->count() == 0 && eopt->count() == 0)
        throw Error("contfrac needs --value or --expr");
      return run_contfrac(cf_value, vopt->count() > 0, expr, cf_terms, json,
                          out_path);
    }
    if (*detect)
      return run_detect(seq_path, states, empirical_n > 0 ? empirical_n : 30,
                        json, out_path);
  } catch (const NotIrreducible& e) {
    return fail(json, "NotIrreducible", e.what(), kExitNotErgodic);
  } catch (const NotAperiodic& e) {
    return fail(json, "NotAperiodic", e.what(), kExitNotErgodic);
  } catch (const std::exception& e) {
    return fail(json, "error", e.what(), kExitError);
  }
  return kExitError;
}
