#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "umb/report.hpp"
#include "umb/suites.hpp"
#include "umb/zoo.hpp"

#ifndef UMBILIC_BIN
#define UMBILIC_BIN "umbilic"
#endif

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(UMBILIC_BIN) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("exit codes: pass, degenerate, input error, unsupported") {
  CHECK(run("verify 'round_sphere(n=2)' --suite fundamental --samples 6") == 0);
  CHECK(run("verify 'flat_torus(n=2)' --suite killing --samples 6") == 3);
  CHECK(run("verify 'nosuch(n=2)'") == 2);
  CHECK(run("verify hp2") == 3);
  CHECK(run("list-zoo") == 0);
  CHECK(run("search /nonexistent.json") == 2);
}

TEST_CASE("identity failure exits 1") {
  // an impossible global tolerance forces failures
  CHECK(run("verify 'round_sphere(n=2)' --suite fundamental --samples 6 --tolerance 1e-30") ==
        1);
}

TEST_CASE("reports are byte-identical across runs") {
  const std::string out1 = "/tmp/umb_cli_rep1.json";
  const std::string out2 = "/tmp/umb_cli_rep2.json";
  const std::string args = "verify 'cone(round_sphere(n=2))' --suite cone --samples 8 "
                           "--seed 3 --format json --out ";
  REQUIRE(run(args + out1) == 0);
  REQUIRE(run(args + out2) == 0);
  const std::string a = slurp(out1);
  const std::string b = slurp(out2);
  CHECK(!a.empty());
  CHECK(a == b);
  std::remove(out1.c_str());
  std::remove(out2.c_str());
}

TEST_CASE("json report round-trips losslessly") {
  const auto spec = umb::zoo::build("round_sphere", {{"n", 2}});
  umb::SuiteOptions opt;
  opt.samples = 6;
  const umb::VerificationReport rep = umb::fundamental_suite(*spec, opt);
  const nlohmann::json j = umb::to_json(rep);
  const umb::VerificationReport back = umb::report_from_json(j);
  CHECK(umb::to_json(back) == j);
  CHECK(back.rows.size() == rep.rows.size());
  CHECK(back.overall == rep.overall);
}

TEST_CASE("spec file input and sample override") {
  const std::string spec_path = "/tmp/umb_cli_spec.json";
  {
    std::ofstream os(spec_path);
    os << R"({"name": "round_sphere", "params": {"n": 2, "r": 1}, "sample_count": 6})";
  }
  CHECK(run("verify " + spec_path + " --suite fundamental") == 0);
  std::remove(spec_path.c_str());
}

TEST_CASE("search subcommand emits a result file") {
  const std::string cfg_path = "/tmp/umb_cli_search.json";
  const std::string out_path = "/tmp/umb_cli_search_out.json";
  {
    std::ofstream os(cfg_path);
    os << R"({"family": "perturbed_s3_in_r4", "param_dim": 4, "budget": 400,
              "seed": 1, "sample_count": 15,
              "thresholds": {"converge": 1e-6}})";
  }
  CHECK(run("search " + cfg_path + " --format json --out " + out_path) == 0);
  const std::string text = slurp(out_path);
  CHECK(text.find("converged_to_umbilical") != std::string::npos);
  CHECK(text.find("\"trace\"") != std::string::npos);
  std::remove(cfg_path.c_str());
  std::remove(out_path.c_str());
}

TEST_CASE("holonomy subcommand") {
  CHECK(run("holonomy 'euclidean(n=3)' --degree 2 --samples 6") == 0);
}
