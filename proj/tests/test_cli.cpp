#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "benford/randomchain.hpp"
#include "benford/report.hpp"
#include "test_util.hpp"

using namespace benford;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd =
      std::string("\"") + BENFORD_CLI_PATH + "\" " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  RunResult r;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  int rc = pclose(p);
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

std::string shellquote(const std::string& path) { return "\"" + path + "\""; }

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() /
             ("benford_cli_test_" + std::to_string(getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("analyze exit codes") {
  CHECK(run_cli("analyze " + shellquote(data_path("ex12.csv"))).exit_code == 0);
  CHECK(run_cli("analyze " + shellquote(data_path("ex3i.csv"))).exit_code == 2);
  CHECK(run_cli("analyze " + shellquote(data_path("period2.csv"))).exit_code ==
        3);
  CHECK(run_cli("analyze /no/such/file.csv").exit_code == 1);
}

TEST_CASE("analyze json output is parseable and stable") {
  std::string args = "analyze " + shellquote(data_path("ex13.csv")) + " --json";
  auto r1 = run_cli(args);
  CHECK(r1.exit_code == 0);
  json j = json::parse(r1.out);
  CHECK(j["schema"] == "benford-chain/1");
  CHECK(j["gate_ok"] == true);
  CHECK(j["resonance"]["status"] == "nonresonant");
  auto r2 = run_cli(args);
  CHECK(r2.out == r1.out);
}

TEST_CASE("analyze json reports errors as json") {
  auto r = run_cli("analyze /no/such/file.csv --json");
  CHECK(r.exit_code == 1);
  json j = json::parse(r.out);
  CHECK(j.contains("error"));
}

TEST_CASE("simulate reruns are byte-identical and round-trip") {
  std::string args = "simulate " + shellquote(data_path("ex12.csv")) +
                     " --n 500 --full-precision";
  auto r1 = run_cli(args);
  REQUIRE(r1.exit_code == 0);
  CHECK(run_cli(args).out == r1.out);

  auto parsed = parse_frequency_csv(r1.out);
  REQUIRE(parsed.headers.size() == 10);
  CHECK(parsed.headers[0] == "(1;1)");
  CHECK(parsed.headers[8] == "(3;3)");

  // full precision means exact count/total ratios
  auto P = load_chain("ex12.csv");
  auto dec = spectral_projectors(P, eigen_decompose(P));
  auto t = tally_component_first_digits(dec, 0, 0,
                                        SeriesKind::pn_minus_pstar, 500);
  for (int row = 0; row < 9; ++row)
    CHECK(parsed.columns[0][static_cast<size_t>(row)] ==
          double(t.counts[static_cast<size_t>(row)]) / double(t.total));
}

TEST_CASE("seqdigits reproduces the factorial tally") {
  auto r = run_cli("seqdigits --kind factorial --n 1000 --full-precision");
  REQUIRE(r.exit_code == 0);
  auto parsed = parse_frequency_csv(r.out);
  REQUIRE(parsed.headers.size() == 2);
  const long long want[9] = {293, 176, 124, 102, 69, 87, 51, 51, 47};
  for (int row = 0; row < 9; ++row)
    CHECK(parsed.columns[0][static_cast<size_t>(row)] ==
          double(want[row]) / 1000.0);
}

TEST_CASE("sample matches the library byte for byte") {
  auto dir = temp_dir();
  auto csv_path = (dir / "per_sample.csv").string();
  auto r = run_cli("sample --d 3 --count 5 --n 200 --seed 77 --per-sample-csv " +
                   shellquote(csv_path));
  REQUIRE(r.exit_code == 0);
  auto rep = random_chain_experiment(3, 5, 200, 77);
  CHECK(r.out == sample_report_json(rep) + "\n");

  std::ifstream f(csv_path);
  REQUIRE(f.good());
  std::string line;
  int lines = 0;
  while (std::getline(f, line))
    if (!line.empty()) ++lines;
  CHECK(lines == 6);  // header + five samples
  std::filesystem::remove_all(dir);
}

TEST_CASE("contfrac text and json forms") {
  auto r = run_cli("contfrac --expr golden_ratio --terms 12");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("[1; 1, 1, 1") != std::string::npos);

  auto rj = run_cli("contfrac --expr golden_ratio --terms 12 --json");
  json j = json::parse(rj.out);
  CHECK(j["kind"] == "contfrac");
  CHECK(j["a0"] == 1);
  REQUIRE(j["quotients"].size() == 12);
  for (const auto& q : j["quotients"]) CHECK(q == 1);
  CHECK(j["certified_terms"] == 13);
  CHECK(j["profile"]["max_quotient"] == 1);

  // 0.5 sits exactly on the boundary between the [0;2] and [0;1,1] branches,
  // so under the interval semantics only a0 survives; a generic value keeps
  // a real tail.
  auto rb = run_cli("contfrac --value 0.5 --json");
  json jb = json::parse(rb.out);
  CHECK(jb["a0"] == 0);
  CHECK(jb["quotients"].size() == 0);
  CHECK(jb["certified_terms"] == 1);

  auto rv = run_cli("contfrac --value 0.3010299956639812 --json");
  json jv = json::parse(rv.out);
  CHECK(jv["a0"] == 0);
  REQUIRE(jv["quotients"].size() >= 3);
  CHECK(jv["quotients"][0] == 3);
  CHECK(jv["quotients"][1] == 3);
  CHECK(jv["quotients"][2] == 9);

  CHECK(run_cli("contfrac --expr no_such_name").exit_code == 1);
}

TEST_CASE("detect refuses a deterministic cycle") {
  auto dir = temp_dir();
  auto path = (dir / "cycle.txt").string();
  {
    std::ofstream f(path);
    for (int k = 0; k < 1200; ++k) f << (k % 3) + 1 << ' ';
  }
  auto r = run_cli("detect " + shellquote(path) + " --states 3 --json");
  CHECK(r.exit_code == 3);
  json j = json::parse(r.out);
  CHECK(j["gate_ok"] == false);
  CHECK(j["period"] == 3);
  std::filesystem::remove_all(dir);
}

TEST_CASE("detect recovers a simulated chain") {
  auto P = load_chain("ex12.csv");
  auto path_states = simulate_path(P, 100000, 7);
  auto dir = temp_dir();
  auto path = (dir / "walk.txt").string();
  {
    std::ofstream f(path);
    for (size_t k = 0; k < path_states.size(); ++k) {
      f << path_states[k] + 1;
      f << ((k % 40 == 39) ? '\n' : ' ');
    }
  }
  auto r = run_cli("detect " + shellquote(path) + " --states 3 --json");
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["T"] == 100000);
  CHECK(j["gate_ok"] == true);
  CHECK(j["resonance"] == "nonresonant");
  CHECK(j["non_markov_suspect"] == false);
  for (int i = 0; i < 3; ++i)
    for (int c = 0; c < 3; ++c) {
      double est = j["estimated_matrix"][i][c].get<double>();
      CHECK(std::abs(est - P(i, c)) <= 0.02);
    }
  std::filesystem::remove_all(dir);
}

TEST_CASE("detect guards") {
  auto dir = temp_dir();
  auto path = (dir / "short.txt").string();
  {
    std::ofstream f(path);
    for (int k = 0; k < 50; ++k) f << (k % 2) + 1 << ' ';
  }
  CHECK(run_cli("detect " + shellquote(path) + " --states 2").exit_code == 1);

  auto bad = (dir / "bad.txt").string();
  {
    std::ofstream f(bad);
    for (int k = 0; k < 500; ++k) f << (k % 5) + 1 << ' ';
  }
  CHECK(run_cli("detect " + shellquote(bad) + " --states 2").exit_code == 1);
  std::filesystem::remove_all(dir);
}
