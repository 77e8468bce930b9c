#define DOCTEST_CONFIG_IMPLEMENT
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "betadelta/io.hpp"
#include "doctest.h"

namespace {

std::string g_cli;  // path to the built binary, from argv[1]
std::filesystem::path g_tmp;

int run(const std::string& args, const std::string& stdout_path = "") {
  std::string cmd = g_cli + " " + args;
  if (!stdout_path.empty()) cmd += " > " + stdout_path + " 2>&1";
  else cmd += " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("usage errors exit with code 1") {
  CHECK(run("") == 1);
  CHECK(run("no-such-command") == 1);
  CHECK(run("solve-lpn --delta -1 --n 8 --m 4 --k 2") == 1);
  CHECK(run("experiment --n 16 --m 32 --k 4") == 1);  // m > n
  CHECK(run("solve-qp --n 8 --m 4 --k 2") == 1);      // --beta missing
  CHECK(run("bounds") == 1);                          // --delta missing
  CHECK(run("generate --n 8 --m 4 --k 2 --unknown-flag 1 --out x") == 1);
}

TEST_CASE("bounds subcommand prints the closed-form interval") {
  const auto out = g_tmp / "bounds.txt";
  REQUIRE(run("bounds --m 100 --k 24 --sigma 1 --delta 1.5", out.string()) == 0);
  const std::string text = slurp(out);
  double lo = 0.0, hi = 0.0;
  REQUIRE(std::sscanf(text.c_str(), "gaussian: [%lf, %lf]", &lo, &hi) == 2);
  CHECK(lo == doctest::Approx(0.7651).epsilon(1e-3));
  CHECK(hi == doctest::Approx(4.562).epsilon(1e-3));
}

TEST_CASE("generate round-trips and is deterministic") {
  const auto p1 = g_tmp / "prob1.txt";
  const auto p2 = g_tmp / "prob2.txt";
  REQUIRE(run("generate --n 24 --m 12 --k 3 --sigma-w-sq 0.04 --seed 9 --out " +
              p1.string()) == 0);
  REQUIRE(run("generate --n 24 --m 12 --k 3 --sigma-w-sq 0.04 --seed 9 --out " +
              p2.string()) == 0);
  CHECK(slurp(p1) == slurp(p2));

  const betadelta::SensingProblem p = betadelta::load_problem(p1.string());
  CHECK(p.m() == 12);
  CHECK(p.n() == 24);
  CHECK(p.delta * p.delta == doctest::Approx(12 * 0.04));

  // serialized form is exact: saving the loaded problem reproduces the bytes
  std::ostringstream os;
  betadelta::save_problem(os, p);
  CHECK(os.str() == slurp(p1));
}

TEST_CASE("solve-qp reports the empty solution above beta_max") {
  const auto prob = g_tmp / "prob_qp.txt";
  REQUIRE(run("generate --n 24 --m 12 --k 3 --sigma-w-sq 0.04 --seed 9 --out " +
              prob.string()) == 0);
  const auto out = g_tmp / "solveqp.txt";
  REQUIRE(run("solve-qp --problem " + prob.string() + " --beta 1e9", out.string()) == 0);
  const std::string text = slurp(out);
  CHECK(text.find(" k=0 ") != std::string::npos);
}

TEST_CASE("solve-lpn trivial case exits with code 3") {
  const auto prob = g_tmp / "prob_lpn.txt";
  REQUIRE(run("generate --n 24 --m 12 --k 3 --sigma-w-sq 0.04 --seed 9 --out " +
              prob.string()) == 0);
  CHECK(run("solve-lpn --problem " + prob.string() + " --delta 1e9") == 3);
  CHECK(run("solve-lpn --problem " + prob.string()) == 0);
}

TEST_CASE("bounds --problem reports the recovered-support interval") {
  const auto prob = g_tmp / "prob_bnd.txt";
  REQUIRE(run("generate --n 32 --m 16 --k 3 --sigma-w-sq 0.02 --seed 6 --out " +
              prob.string()) == 0);
  const auto out = g_tmp / "bounds_prob.txt";
  REQUIRE(run("bounds --problem " + prob.string(), out.string()) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("exact: [") != std::string::npos);
  CHECK(text.find("gaussian: [") != std::string::npos);
  CHECK(text.find("beta_star=") != std::string::npos);
}

TEST_CASE("sweep writes the CSV pair and is byte-deterministic") {
  const auto csv1 = g_tmp / "sweep1.csv";
  const auto csv2 = g_tmp / "sweep2.csv";
  const std::string base =
      "sweep --n 32 --m 16 --k 3 --sigma-w-sq 0.02 --seed 4 --grid-points 12 --out ";
  REQUIRE(run(base + csv1.string()) == 0);
  REQUIRE(run(base + csv2.string()) == 0);
  const std::string text = slurp(csv1);
  CHECK(text.rfind("beta,g_value,qp_error,qp_residual,qp_k\n", 0) == 0);
  CHECK(text == slurp(csv2));
  CHECK(std::filesystem::exists(csv1.string() + ".meta"));
  CHECK(slurp(csv1.string() + ".meta") == slurp(csv2.string() + ".meta"));
}

TEST_CASE("experiment writes per-trial and aggregate reports deterministically") {
  const auto dir1 = g_tmp / "exp1";
  const auto dir2 = g_tmp / "exp2";
  const std::string base =
      "experiment --n 32 --m 16 --k 3 --sigma-w-sq 0.02 --trials 2 --seed 11 "
      "--grid-points 10 --out-dir ";
  REQUIRE(run(base + dir1.string()) == 0);
  REQUIRE(run(base + dir2.string()) == 0);
  for (const char* name : {"trial000.csv", "trial000.csv.meta", "trial001.csv",
                           "trial001.csv.meta", "aggregate.csv", "aggregate.csv.meta"}) {
    CAPTURE(name);
    REQUIRE(std::filesystem::exists(dir1 / name));
    CHECK(slurp(dir1 / name) == slurp(dir2 / name));
  }
}

TEST_SUITE_END();

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: cli_tests <path-to-cli> [doctest args]\n");
    return 2;
  }
  g_cli = argv[1];
  g_tmp = std::filesystem::temp_directory_path() / "betadelta_cli_tests";
  std::filesystem::remove_all(g_tmp);
  std::filesystem::create_directories(g_tmp);

  doctest::Context context;
  context.applyCommandLine(argc - 1, argv + 1);
  const int rc = context.run();
  std::filesystem::remove_all(g_tmp);
  return rc;
}
