#include "shb/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace shb {

namespace {

using json = nlohmann::json;

json parse(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw std::invalid_argument(std::string(what) + ": invalid JSON");
  return j;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
}

QuadraticProblem problem_from_json(const std::string& text) {
  const json j = parse(text, "problem spec");
  if (!j.contains("eigenvalues") || !j["eigenvalues"].is_array())
    throw std::invalid_argument("problem spec: missing eigenvalues array");
  std::vector<double> eigenvalues =
      j["eigenvalues"].get<std::vector<double>>();
  const double sigma2 = j.value("sigma2", 0.0);
  std::vector<double> w_star;
  if (j.contains("w_star")) w_star = j["w_star"].get<std::vector<double>>();
  return QuadraticProblem(std::move(eigenvalues), sigma2, std::move(w_star));
}

QuadraticProblem problem_from_json_file(const std::string& path) {
  return problem_from_json(read_text_file(path));
}

std::string problem_to_json(const QuadraticProblem& problem) {
  json j{{"eigenvalues", problem.eigenvalues()},
         {"sigma2", problem.sigma2()},
         {"w_star", problem.w_star()}};
  return j.dump(2);
}

Schedule schedule_from_json(const std::string& text,
                            std::optional<TheoremScheduleReport>* report) {
  const json j = parse(text, "schedule spec");
  const std::string kind = j.value("kind", "");
  if (kind == "constant") {
    return constant_schedule(j.at("eta").get<double>(),
                             j.at("T").get<std::size_t>());
  }
  if (kind == "step") {
    return step_decay_schedule(
        j.at("eta0").get<double>(), j.at("gamma").get<double>(),
        j.at("n").get<std::size_t>(), j.at("T").get<std::size_t>());
  }
  if (kind == "theorem") {
    TheoremSchedule ts = theorem_step_decay(
        j.at("kappa").get<double>(), j.at("L").get<double>(),
        j.at("T").get<std::size_t>(), j.at("C").get<double>());
    if (report != nullptr) *report = ts.report;
    return std::move(ts.schedule);
  }
  throw std::invalid_argument(
      "schedule spec: kind must be constant, step or theorem");
}

Schedule schedule_from_json_file(const std::string& path,
                                 std::optional<TheoremScheduleReport>* report) {
  return schedule_from_json(read_text_file(path), report);
}

std::string schedule_report_to_json(const TheoremScheduleReport& report) {
  json j{{"C", report.C},
         {"K", report.K},
         {"n", report.n},
         {"beta", report.beta},
         {"feasible", report.feasible},
         {"h", report.h},
         {"violated", report.violated},
         {"requirements",
          {{"req_C", report.req_decay_factor},
           {"req_var_eta_1", report.req_stage_rates},
           {"req_var_k_l", report.req_stage_length},
           {"req_var_T", report.req_iterations}}},
         {"req_var_T_lhs", report.req_iterations_lhs},
         {"req_var_T_rhs", report.req_iterations_rhs},
         {"exact_stage_count", report.exact_stage_count},
         {"stage_count_rounded", report.stage_count_rounded}};
  return j.dump(2);
}

std::string check_report_to_json(const CheckReport& report) {
  json j{{"name", report.name},
         {"trials", report.trials},
         {"failures", report.failures},
         {"applicable", report.applicable},
         {"passed", report.passed()},
         {"worst_margin", report.worst_margin}};
  if (!report.worst_witness.empty()) {
    j["worst_witness"] = json::parse(report.worst_witness, nullptr, false);
  }
  return j.dump(2);
}

std::string check_reports_to_json(std::span<const CheckReport> reports) {
  json arr = json::array();
  for (const CheckReport& report : reports)
    arr.push_back(json::parse(check_report_to_json(report)));
  return arr.dump(2);
}

std::string empirical_risk_to_json(const EmpiricalRisk& risk) {
  json j{{"checkpoints", risk.checkpoints},
         {"mean", risk.mean},
         {"se", risk.se},
         {"replications", risk.replications}};
  if (!risk.mean_trajectory.empty()) j["mean_trajectory"] = risk.mean_trajectory;
  return j.dump(2);
}

}  // namespace shb
