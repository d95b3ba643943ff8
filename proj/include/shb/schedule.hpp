#ifndef SHB_SCHEDULE_HPP
#define SHB_SCHEDULE_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace shb {

/// Piecewise-constant learning-rate sequence: stage l (1-based) runs
/// stage_lengths[l-1] iterations at rate stage_rates[l-1]. Immutable;
/// eta_at is a pure function.
class Schedule {
 public:
  Schedule(std::vector<double> stage_rates,
           std::vector<std::size_t> stage_lengths);

  /// Rate at iteration t, 0 <= t < total_iterations(). Throws
  /// std::out_of_range past the horizon.
  double eta_at(std::size_t t) const;

  std::size_t total_iterations() const { return total_; }
  const std::vector<double>& stage_rates() const { return rates_; }
  const std::vector<std::size_t>& stage_lengths() const { return lengths_; }
  double max_rate() const;

 private:
  std::vector<double> rates_;
  std::vector<std::size_t> lengths_;
  std::vector<std::size_t> stage_end_;  // exclusive cumulative ends
  std::size_t total_;
};

/// Single stage at `eta` for T iterations.
Schedule constant_schedule(double eta, std::size_t T);

/// n stages of length floor(T/n) (last stage absorbs the remainder);
/// stage l has rate eta0 * gamma^(l-1). Requires T >= n.
Schedule step_decay_schedule(double eta0, double gamma, std::size_t n,
                             std::size_t T);

/// Feasibility report for the theorem-compliant step decay. `violated` names
/// the requirements that failed; construction-time requirements re-evaluate
/// to booleans so the report can be serialized wholesale.
struct TheoremScheduleReport {
  double C = 0.0;
  std::size_t K = 0;        // common stage length (last stage absorbs remainder)
  std::size_t n = 0;        // number of stages
  double beta = 0.0;        // (1 - 1/sqrt(kappa))^2
  bool feasible = false;
  double h = 0.0;           // 4 ln(2^6 T^4) log_C(T sqrt(kappa))
  std::vector<std::string> violated;

  bool req_decay_factor = false;    // 1 < C <= T sqrt(kappa)
  bool req_stage_rates = false;     // eta'_l = 1/(L C^(l-1))
  bool req_stage_length = false;    // K = floor(T / ceil(log_C(T sqrt(kappa))))
  bool req_iterations = false;      // the total-iteration inequality
  double req_iterations_lhs = 0.0;  // T / (ln(2^14 T^8) ln(2^6 T^4) log_C(T^2))
  double req_iterations_rhs = 0.0;  // 2 C sqrt(kappa)
  double exact_stage_count = 0.0;   // log_C(T sqrt(kappa)) before rounding
  bool stage_count_rounded = false;
};

struct TheoremSchedule {
  Schedule schedule;
  TheoremScheduleReport report;
};

/// Step decay of the convergence theorem: beta = (1 - 1/sqrt(kappa))^2,
/// stage rates 1/(L C^(l-1)), n = ceil(log_C(T sqrt(kappa))) stages of
/// length floor(T/n) with the remainder appended to the last stage.
/// Infeasibility (the total-iteration requirement) is reported, not thrown;
/// C outside (1, T sqrt(kappa)] is rejected. Requires kappa >= 4.
TheoremSchedule theorem_step_decay(double kappa, double L, std::size_t T,
                                   double C);

/// The total-iteration requirement
/// T / (ln(2^14 T^8) ln(2^6 T^4) log_C(T^2)) >= 2 C sqrt(kappa).
bool theorem_iteration_requirement(std::size_t T, double kappa, double C);

/// Smallest T satisfying the total-iteration requirement, by doubling then
/// bisection.
std::size_t min_feasible_T(double kappa, double C);

/// Momentum of the theorem, (1 - 1/sqrt(kappa))^2.
double theorem_momentum(double kappa);

/// Auxiliary constant h = 4 ln(2^6 T^4) log_C(T sqrt(kappa)).
double theorem_aux_h(std::size_t T, double kappa, double C);

}  // namespace shb

#endif  // SHB_SCHEDULE_HPP
