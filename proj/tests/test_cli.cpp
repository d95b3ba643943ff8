// End-to-end checks of the command-line surface: exit codes, file formats
// and report determinism. The binary path comes from the SHB_CLI environment
// variable set by the test harness.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string cli() {
  const char* path = std::getenv("SHB_CLI");
  REQUIRE_MESSAGE(path != nullptr, "SHB_CLI must point at the CLI binary");
  return path;
}

int run(const std::string& args) {
  const std::string command = cli() + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("exact trace CSV contract") {
  write("/tmp/shb_cli_problem.json",
        R"({"eigenvalues": [1.0, 0.5], "sigma2": 0.0})");
  write("/tmp/shb_cli_schedule.json",
        R"({"kind": "constant", "eta": 0.5, "T": 6})");
  CHECK(run("exact --problem /tmp/shb_cli_problem.json "
            "--schedule /tmp/shb_cli_schedule.json --w0 1 "
            "--out /tmp/shb_cli_trace.csv") == 0);
  const std::string csv = slurp("/tmp/shb_cli_trace.csv");
  CHECK(csv.rfind("iteration,bias_risk,variance_risk,total_risk\n", 0) == 0);
  // sigma2 = 0: every variance entry must be zero.
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    const auto first = line.find(',');
    const auto second = line.find(',', first + 1);
    const auto third = line.find(',', second + 1);
    CHECK(line.substr(second + 1, third - second - 1) == "0");
  }
}

TEST_CASE("usage and input errors exit with 2") {
  CHECK(run("exact --problem /tmp/does_not_exist.json "
            "--schedule /tmp/shb_cli_schedule.json") == 2);
  CHECK(run("exact --problem /tmp/shb_cli_problem.json "
            "--schedule /tmp/shb_cli_schedule.json --bogus-flag 1") == 2);
  CHECK(run("verify --check not_a_check") == 2);
  CHECK(run("nonexistent-subcommand") == 2);
}

TEST_CASE("verify: pass, determinism and the failure path") {
  CHECK(run("verify --check aux_inequalities --out /tmp/shb_cli_aux1.json") ==
        0);
  CHECK(run("verify --check aux_inequalities --out /tmp/shb_cli_aux2.json") ==
        0);
  CHECK(slurp("/tmp/shb_cli_aux1.json") == slurp("/tmp/shb_cli_aux2.json"));

  CHECK(run("verify --check power_norm --seed 7 --trials 200 "
            "--out /tmp/shb_cli_pn1.json") == 0);
  CHECK(run("verify --check power_norm --seed 7 --trials 200 "
            "--out /tmp/shb_cli_pn2.json") == 0);
  CHECK(slurp("/tmp/shb_cli_pn1.json") == slurp("/tmp/shb_cli_pn2.json"));

  CHECK(run("verify --check power_norm --trials 50 --rhs-scale 1e-3 "
            "--out /tmp/shb_cli_fail.json") == 1);
  CHECK(slurp("/tmp/shb_cli_fail.json").find("worst_witness") !=
        std::string::npos);
}

TEST_CASE("simulate CSV contract") {
  write("/tmp/shb_cli_noisy.json",
        R"({"eigenvalues": [1.0, 0.5], "sigma2": 0.4})");
  CHECK(run("simulate --problem /tmp/shb_cli_noisy.json "
            "--schedule /tmp/shb_cli_schedule.json --method shb --beta 0.5 "
            "--trials 20 --checkpoints 0,3,6 --out /tmp/shb_cli_sim.csv") ==
        0);
  const std::string csv = slurp("/tmp/shb_cli_sim.csv");
  CHECK(csv.rfind("checkpoint,mean,se,n\n", 0) == 0);
  CHECK(csv.find("\n6,") != std::string::npos);
}

TEST_CASE("simulate JSON output") {
  CHECK(run("simulate --problem /tmp/shb_cli_noisy.json "
            "--schedule /tmp/shb_cli_schedule.json --method sgd --trials 8 "
            "--json --out /tmp/shb_cli_sim.json") == 0);
  const std::string json = slurp("/tmp/shb_cli_sim.json");
  CHECK(json.find("\"checkpoints\"") != std::string::npos);
  CHECK(json.find("\"replications\": 8") != std::string::npos);
}

TEST_CASE("race CSV contract") {
  CHECK(run("race --kappa 100 --target 1e-3 --out /tmp/shb_cli_race.csv") ==
        0);
  const std::string csv = slurp("/tmp/shb_cli_race.csv");
  CHECK(csv.rfind("kappa,t_sgd,t_shb,ratio\n", 0) == 0);

  // Heavy ball never loses this race, even at the smallest admissible kappa.
  CHECK(run("race --kappa 4 --target 1e-6 --out /tmp/shb_cli_race4.csv") == 0);
  const std::string csv4 = slurp("/tmp/shb_cli_race4.csv");
  const auto last_comma = csv4.find_last_of(',');
  REQUIRE(last_comma != std::string::npos);
  CHECK(std::stod(csv4.substr(last_comma + 1)) >= 1.0);
}

TEST_CASE("theorem subcommands succeed on defaults") {
  CHECK(run("theorem1 --out /tmp/shb_cli_t1.json") == 0);
  CHECK(slurp("/tmp/shb_cli_t1.json").find("\"failures\": 0") !=
        std::string::npos);
  CHECK(run("report --kappa 4 --L 1 --T 10000000 --C 2 "
            "--out /tmp/shb_cli_report.json") == 0);
  CHECK(slurp("/tmp/shb_cli_report.json").find("\"feasible\": true") !=
        std::string::npos);
}
