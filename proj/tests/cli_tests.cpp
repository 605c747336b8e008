// End-to-end checks of the command-line tool: exit codes, output files and
// reproducibility, driven through the real binary.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(TFDASH_CLI_PATH) + " " + args + " > cli_test_stdout.txt 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string scenario(const char* name) {
  return (fs::path(TFDASH_SCENARIO_DIR) / name).string();
}

fs::path fresh_dir(const char* name) {
  const fs::path dir = fs::path("cli_test_out") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("run writes the three output files and exits zero") {
  const auto out = fresh_dir("run");
  const int rc = run_cli("run --config " + scenario("single-client-10m.json") +
                         " --out " + out.string());
  CHECK(rc == 0);
  CHECK(fs::exists(out / "sessions.csv"));
  CHECK(fs::exists(out / "metrics.csv"));
  CHECK(fs::exists(out / "summary.txt"));
  CHECK(read_file(out / "summary.txt").find("mean_inefficiency=") != std::string::npos);
}

TEST_CASE("identical seeds reproduce byte-identical outputs") {
  const auto a = fresh_dir("det_a");
  const auto b = fresh_dir("det_b");
  const std::string cfg = scenario("two-client-3000-1500-4000.json");
  CHECK(run_cli("run --config " + cfg + " --seed 5 --out " + a.string()) == 0);
  CHECK(run_cli("run --config " + cfg + " --seed 5 --out " + b.string()) == 0);
  CHECK(read_file(a / "sessions.csv") == read_file(b / "sessions.csv"));
  CHECK(read_file(a / "metrics.csv") == read_file(b / "metrics.csv"));
}

TEST_CASE("missing config file exits 2") {
  CHECK(run_cli("run --config /nonexistent/nope.json") == 2);
}

TEST_CASE("malformed config exits 2") {
  const auto dir = fresh_dir("badjson");
  const auto p = dir / "bad.json";
  std::ofstream(p) << "{ this is not json";
  CHECK(run_cli("run --config " + p.string()) == 2);
}

TEST_CASE("invalid alpha exits 3 and names the field") {
  const auto dir = fresh_dir("badalpha");
  const auto p = dir / "bad_alpha.json";
  std::ofstream(p) << R"({
    "horizon_s": 50,
    "capacity": { "breakpoints": [[0, 3000]] },
    "params": { "alpha": 3.0 },
    "clients": [ { "id": 0, "policy": "tfdash" } ]
  })";
  CHECK(run_cli("run --config " + p.string() + " --out " + dir.string()) == 3);
  CHECK(read_file("cli_test_stdout.txt").find("alpha") != std::string::npos);
}

TEST_CASE("a segment budget beyond the horizon exits 4") {
  const auto dir = fresh_dir("horizon");
  const auto p = dir / "short.json";
  std::ofstream(p) << R"({
    "horizon_s": 10,
    "capacity": { "breakpoints": [[0, 1000]] },
    "clients": [ { "id": 0, "policy": "tfdash", "segments": 100000 } ]
  })";
  CHECK(run_cli("run --config " + p.string() + " --out " + dir.string()) == 4);
}

TEST_CASE("sweep writes comparison.csv with one row per cell") {
  const auto out = fresh_dir("sweep");
  const int rc = run_cli("sweep --config " + scenario("single-client-10m.json") +
                         " --sweep \"clients=2..3; capacities=3000,6000; policies=tfdash;"
                         " seeds=0..1; horizon=60\" --jobs 2 --out " + out.string());
  CHECK(rc == 0);
  const std::string csv = read_file(out / "comparison.csv");
  // header + 2 client counts x 2 capacities
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("an empty sweep spec degenerates to a plain run") {
  const auto out = fresh_dir("sweep_empty");
  const int rc = run_cli("sweep --config " + scenario("single-client-10m.json") +
                         " --sweep \"\" --out " + out.string());
  CHECK(rc == 0);
  CHECK(fs::exists(out / "sessions.csv"));
  CHECK(fs::exists(out / "summary.txt"));
}

TEST_CASE("bad sweep spec exits 2") {
  const auto out = fresh_dir("sweep_bad");
  CHECK(run_cli("sweep --config " + scenario("single-client-10m.json") +
                " --sweep \"frobnicate=1\" --out " + out.string()) == 2);
}
