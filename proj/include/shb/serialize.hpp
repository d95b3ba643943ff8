#ifndef SHB_SERIALIZE_HPP
#define SHB_SERIALIZE_HPP

#include <optional>
#include <span>
#include <string>

#include "shb/lemma_checks.hpp"
#include "shb/problem.hpp"
#include "shb/schedule.hpp"
#include "shb/simulate.hpp"

namespace shb {

/// Problem spec: {"eigenvalues": [...], "sigma2": x, "w_star": [...]}
/// (w_star optional, defaults to zeros).
QuadraticProblem problem_from_json(const std::string& text);
QuadraticProblem problem_from_json_file(const std::string& path);
std::string problem_to_json(const QuadraticProblem& problem);

/// Schedule spec: {"kind": "constant"|"step"|"theorem", ...}. For the
/// theorem kind the feasibility report is filled when requested.
Schedule schedule_from_json(const std::string& text,
                            std::optional<TheoremScheduleReport>* report = nullptr);
Schedule schedule_from_json_file(const std::string& path,
                                 std::optional<TheoremScheduleReport>* report = nullptr);

std::string schedule_report_to_json(const TheoremScheduleReport& report);
std::string check_report_to_json(const CheckReport& report);
std::string check_reports_to_json(std::span<const CheckReport> reports);
std::string empirical_risk_to_json(const EmpiricalRisk& risk);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace shb

#endif  // SHB_SERIALIZE_HPP
