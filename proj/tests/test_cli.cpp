// Drives the installed command-line binary end to end: exit codes, artifact
// trees, stage-by-stage equivalence, config-file replay.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "doctest.h"

#ifndef FRINGEBRUSH_CLI_PATH
#error "FRINGEBRUSH_CLI_PATH must point at the command-line binary"
#endif

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(FRINGEBRUSH_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status < 0) return -1;
#ifdef WEXITSTATUS
  return WEXITSTATUS(status);
#else
  return status;
#endif
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("fb_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::map<std::string, std::string> tree_bytes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    out[entry.path().filename().string()] = buf.str();
  }
  return out;
}

const std::string kSmallRun =
    "--gen gaussian-bump --height 32 --width 32 --method tv --ratio 0.75 "
    "--ordering cake --noise-var 0.0005 --seed 3";

}  // namespace

TEST_CASE("cli: help and version exit cleanly") {
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("pipeline --help") == 0);
  CHECK(run_cli("--version") == 0);
}

TEST_CASE("cli: usage errors exit with 2") {
  CHECK(run_cli("") == 2);                      // no subcommand
  CHECK(run_cli("pipeline --no-such-flag") == 2);
  CHECK(run_cli("pipeline --mode diagonal --out /tmp/fb_cli_nope") == 2);
  // Exact inversion needs every measurement; a truncated request is a
  // configuration error.
  fs::path out = fresh_dir("hadamard_partial");
  CHECK(run_cli("pipeline --method hadamard --ratio 0.5 --out " +
                out.string()) == 2);
}

TEST_CASE("cli: missing input data exits with 3") {
  fs::path out = fresh_dir("no_inputs");
  CHECK(run_cli("reconstruct --out " + out.string()) == 3);
  fs::remove_all(out);
}

TEST_CASE("cli: strict mode reports unconverged columns with 4") {
  fs::path out = fresh_dir("strict");
  CHECK(run_cli("pipeline " + kSmallRun + " --max-iterations 2 --strict "
                "--out " + out.string()) == 4);
  // Without --strict the same run completes with a warning only.
  fs::path calm = fresh_dir("calm");
  CHECK(run_cli("pipeline " + kSmallRun + " --max-iterations 2 --out " +
                calm.string()) == 0);
  fs::remove_all(out);
  fs::remove_all(calm);
}

TEST_CASE("cli: pipeline equals its stages run one at a time") {
  fs::path whole = fresh_dir("whole");
  fs::path staged = fresh_dir("staged");
  REQUIRE(run_cli("pipeline " + kSmallRun + " --out " + whole.string()) == 0);
  for (const char* stage : {"simulate", "reconstruct", "phase", "metrics"}) {
    REQUIRE(run_cli(std::string(stage) + " " + kSmallRun + " --out " +
                    staged.string()) == 0);
  }
  auto a = tree_bytes(whole);
  auto b = tree_bytes(staged);
  REQUIRE(a.size() == b.size());
  for (const auto& [name, bytes] : a) {
    INFO(name);
    REQUIRE(b.count(name) == 1);
    CHECK(b[name] == bytes);
  }
  CHECK(a.count("report.csv") == 1);
  CHECK(a.count("config.txt") == 1);
  fs::remove_all(whole);
  fs::remove_all(staged);
}

TEST_CASE("cli: worker count never changes the artifacts") {
  fs::path one = fresh_dir("w1");
  fs::path eight = fresh_dir("w8");
  REQUIRE(run_cli("pipeline " + kSmallRun + " --workers 1 --out " +
                  one.string()) == 0);
  REQUIRE(run_cli("pipeline " + kSmallRun + " --workers 8 --out " +
                  eight.string()) == 0);
  auto a = tree_bytes(one);
  auto b = tree_bytes(eight);
  REQUIRE(a.size() == b.size());
  for (const auto& [name, bytes] : a) {
    INFO(name);
    CHECK(b[name] == bytes);
  }
  fs::remove_all(one);
  fs::remove_all(eight);
}

TEST_CASE("cli: a saved config file reproduces the run") {
  fs::path first = fresh_dir("cfg_src");
  fs::path replay = fresh_dir("cfg_replay");
  REQUIRE(run_cli("pipeline " + kSmallRun + " --out " + first.string()) == 0);
  REQUIRE(run_cli("pipeline --config " + (first / "config.txt").string() +
                  " --out " + replay.string()) == 0);
  auto a = tree_bytes(first);
  auto b = tree_bytes(replay);
  REQUIRE(a.size() == b.size());
  for (const auto& [name, bytes] : a) {
    INFO(name);
    CHECK(b[name] == bytes);
  }
  // Explicit flags still win over the config file.
  fs::path overridden = fresh_dir("cfg_override");
  REQUIRE(run_cli("pipeline --config " + (first / "config.txt").string() +
                  " --seed 9 --out " + overridden.string()) == 0);
  auto c = tree_bytes(overridden);
  CHECK(c["measurements.mset"] != a["measurements.mset"]);
  fs::remove_all(first);
  fs::remove_all(replay);
  fs::remove_all(overridden);
}

TEST_CASE("cli: patterns writes the fringe and sensing artifacts") {
  fs::path out = fresh_dir("patterns");
  REQUIRE(run_cli("patterns --height 32 --width 32 --out " + out.string()) ==
          0);
  auto tree = tree_bytes(out);
  CHECK(tree.count("fringe.fmap") == 1);
  CHECK(tree.count("fringe_preview.pgm") == 1);
  CHECK(tree.count("basis.hmat") == 1);
  fs::remove_all(out);
}

TEST_CASE("cli: sweep writes one csv over the grid") {
  fs::path out = fresh_dir("sweep");
  REQUIRE(run_cli("sweep --gen checkerboard --height 32 --width 32 "
                  "--method hadamard --modes col,row --ratios 1.0 "
                  "--variances 0,0.01 --seeds 0,1 --out " +
                  out.string()) == 0);
  std::ifstream in(out / "report.csv");
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "mode,method,ratio,noise_variance,seed,subject,mse,psnr_db,"
        "masked_pixels");
  int rows = 0;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 2 * 1 * 2 * 2 * 2);  // modes x ratios x variances x seeds x subjects
  fs::remove_all(out);
}
