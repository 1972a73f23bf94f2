#include "benford/chains.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

namespace benford {

StochasticMatrix validate_stochastic(const Eigen::MatrixXd& raw) {
  if (raw.rows() != raw.cols())
    throw DimensionTooSmall("matrix is not square");
  const int d = static_cast<int>(raw.rows());
  if (d < 2) throw DimensionTooSmall("need at least 2 states");
  if (d > 16) throw DimensionTooSmall("at most 16 states supported");
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double x = raw(i, j);
      if (!std::isfinite(x)) throw NegativeEntry("non-finite entry");
      if (x < 0)
        throw NegativeEntry("entry (" + std::to_string(i + 1) + "," +
                            std::to_string(j + 1) + ") is negative");
      if (x > 1 + 1e-9)
        throw RowSumViolation("entry (" + std::to_string(i + 1) + "," +
                              std::to_string(j + 1) + ") exceeds 1");
    }
    const double s = raw.row(i).sum();
    if (std::abs(s - 1.0) > 1e-9)
      throw RowSumViolation("row " + std::to_string(i + 1) + " sums to " +
                            std::to_string(s));
  }
  Eigen::MatrixXd m = raw;
  for (int i = 0; i < d; ++i) m.row(i) /= m.row(i).sum();
  return StochasticMatrix(std::move(m));
}

namespace {

// Iterative Tarjan SCC on the positive-entry digraph.
std::vector<std::vector<int>> tarjan_sccs(const Eigen::MatrixXd& m) {
  const int d = static_cast<int>(m.rows());
  std::vector<int> index(d, -1), low(d, 0), stack;
  std::vector<bool> on_stack(d, false);
  std::vector<std::vector<int>> sccs;
  int next_index = 0;

  struct Frame {
    int v;
    int next_child;
  };
  for (int root = 0; root < d; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      bool descended = false;
      while (f.next_child < d) {
        const int w = f.next_child++;
        if (m(f.v, w) <= 0) continue;
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[f.v] = std::min(low[f.v], index[w]);
      }
      if (descended) continue;
      if (low[f.v] == index[f.v]) {
        std::vector<int> comp;
        for (;;) {
          const int w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
          if (w == f.v) break;
        }
        std::sort(comp.begin(), comp.end());
        sccs.push_back(std::move(comp));
      }
      const int v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }
  // Deterministic order: by smallest member.
  std::sort(sccs.begin(), sccs.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  return sccs;
}

// gcd of cycle lengths inside one SCC: BFS levels, then gcd over
// level[u] + 1 - level[v] for intra-SCC edges u->v. 0 means no cycle at all.
int scc_period(const Eigen::MatrixXd& m, const std::vector<int>& comp) {
  const int d = static_cast<int>(m.rows());
  std::vector<bool> in_comp(d, false);
  for (int v : comp) in_comp[v] = true;
  std::vector<int> level(d, -1);
  std::vector<int> queue{comp[0]};
  level[comp[0]] = 0;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    const int u = queue[qi];
    for (int w = 0; w < d; ++w) {
      if (m(u, w) <= 0 || !in_comp[w]) continue;
      if (level[w] == -1) {
        level[w] = level[u] + 1;
        queue.push_back(w);
      }
    }
  }
  int g = 0;
  for (int u : comp)
    for (int w = 0; w < d; ++w)
      if (m(u, w) > 0 && in_comp[w])
        g = std::gcd(g, std::abs(level[u] + 1 - level[w]));
  return g;
}

}  // namespace

ChainClassification classify(const StochasticMatrix& P) {
  const Eigen::MatrixXd& m = P.entries();
  const int d = P.d();
  ChainClassification c;
  c.strongly_connected_components = tarjan_sccs(m);
  c.irreducible = c.strongly_connected_components.size() == 1;

  // An SCC is closed (recurrent) when no positive edge leaves it.
  for (size_t k = 0; k < c.strongly_connected_components.size(); ++k) {
    const auto& comp = c.strongly_connected_components[k];
    std::vector<bool> in_comp(d, false);
    for (int v : comp) in_comp[v] = true;
    bool closed = true;
    for (int v : comp)
      for (int w = 0; w < d && closed; ++w)
        if (m(v, w) > 0 && !in_comp[w]) closed = false;
    if (closed) c.recurrent_classes.push_back(static_cast<int>(k));
  }

  int period = 1;
  for (int k : c.recurrent_classes) {
    const int g = scc_period(m, c.strongly_connected_components[k]);
    period = std::max(period, g == 0 ? 1 : g);
  }
  c.period = period;
  return c;
}

void require_unichain_aperiodic(const StochasticMatrix& P) {
  const ChainClassification c = classify(P);
  if (!c.unichain())
    throw NotIrreducible("chain has " +
                         std::to_string(c.recurrent_classes.size()) +
                         " closed classes");
  if (!c.aperiodic())
    throw NotAperiodic("recurrent class has period " +
                       std::to_string(c.period));
}

StationaryDistribution stationary_distribution(const StochasticMatrix& P) {
  require_unichain_aperiodic(P);
  const int d = P.d();
  // Stack pi(P - I) = 0 with sum(pi) = 1 and solve the consistent
  // overdetermined system by QR; least-squares is exact here up to roundoff.
  Eigen::MatrixXd A(d + 1, d);
  A.topRows(d) = P.entries().transpose() - Eigen::MatrixXd::Identity(d, d);
  A.bottomRows(1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d + 1);
  b(d) = 1.0;
  Eigen::VectorXd pi = A.colPivHouseholderQr().solve(b);

  for (int i = 0; i < d; ++i)
    if (pi(i) < 0) pi(i) = pi(i) > -1e-10 ? 0.0 : pi(i);
  const double s = pi.sum();
  pi /= s;

  const double residual =
      (pi.transpose() * P.entries() - pi.transpose()).cwiseAbs().maxCoeff();
  if (residual > 1e-10 || pi.minCoeff() < 0)
    throw Error("stationary solve residual " + std::to_string(residual));
  return StationaryDistribution{std::move(pi)};
}

Eigen::MatrixXd limiting_matrix(const StochasticMatrix& P) {
  const Eigen::VectorXd pi = stationary_distribution(P).pi;
  const int d = P.d();
  Eigen::MatrixXd out(d, d);
  for (int i = 0; i < d; ++i) out.row(i) = pi.transpose();
  return out;
}

BigMatrix big_identity(int d) {
  BigMatrix I(d);
  for (int i = 0; i < d; ++i) I.at(i, i) = 1;
  return I;
}

BigMatrix big_mul(const BigMatrix& a, const BigMatrix& b) {
  const int d = a.d;
  BigMatrix c(d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      const BigFloat& aik = a.at(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < d; ++j) c.at(i, j) += aik * b.at(k, j);
    }
  return c;
}

BigMatrix matrix_power_oracle(const StochasticMatrix& P, int n,
                              int precision_bits) {
  if (n > 500) throw NOverflow("n = " + std::to_string(n) + " exceeds 500");
  if (n < 0) throw NOverflow("negative power");
  if (precision_bits < 128)
    throw Error("precision_bits must be at least 128");
  PrecisionGuard guard(static_cast<unsigned>(precision_bits));
  const int d = P.d();
  BigMatrix base(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) base.at(i, j) = P(i, j);
  BigMatrix acc = big_identity(d);
  int e = n;
  while (e > 0) {
    if (e & 1) acc = big_mul(acc, base);
    e >>= 1;
    if (e) base = big_mul(base, base);
  }
  return acc;
}

namespace {

double parse_number(const std::string& tok) {
  size_t pos = 0;
  double v;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError("bad number '" + tok + "'");
  }
  while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos])))
    ++pos;
  if (pos != tok.size()) throw ParseError("trailing junk in '" + tok + "'");
  return v;
}

}  // namespace

Eigen::MatrixXd parse_matrix_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string stripped = line;
    stripped.erase(std::remove_if(stripped.begin(), stripped.end(),
                                  [](unsigned char c) { return std::isspace(c); }),
                   stripped.end());
    if (stripped.empty() || stripped[0] == '#') continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) row.push_back(parse_number(tok));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no rows");
  const size_t d = rows.size();
  Eigen::MatrixXd m(d, d);
  for (size_t i = 0; i < d; ++i) {
    if (rows[i].size() != d)
      throw ParseError("row " + std::to_string(i + 1) + " has " +
                       std::to_string(rows[i].size()) + " columns, expected " +
                       std::to_string(d));
    for (size_t j = 0; j < d; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Eigen::MatrixXd parse_matrix_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("d") || !j.contains("rows"))
    throw ParseError("expected {\"d\": int, \"rows\": [[...]]}");
  const int d = j["d"].get<int>();
  const auto& rows = j["rows"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != d)
    throw ParseError("rows count does not match d");
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != d)
      throw ParseError("row " + std::to_string(i + 1) + " length mismatch");
    for (int jj = 0; jj < d; ++jj) m(i, jj) = rows[i][jj].get<double>();
  }
  return m;
}

Eigen::MatrixXd parse_matrix_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();
  const size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '['))
    return parse_matrix_json(text);
  return parse_matrix_csv(text);
}

std::string matrix_csv(const Eigen::MatrixXd& m) {
  std::ostringstream out;
  out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  return out.str();
}

std::string matrix_json(const Eigen::MatrixXd& m) {
  std::ostringstream out;
  out.precision(17);
  out << "{\"d\": " << m.rows() << ", \"rows\": [";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << (i ? ", [" : "[");
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ", ";
      out << m(i, j);
    }
    out << "]";
  }
  out << "]}";
  return out.str();
}

}  // namespace benford
