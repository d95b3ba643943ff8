#ifndef SHB_DYNAMICS_HPP
#define SHB_DYNAMICS_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "shb/problem.hpp"
#include "shb/schedule.hpp"

namespace shb {

struct RiskPoint {
  std::size_t iteration = 0;
  double bias_risk = 0.0;
  double variance_risk = 0.0;
  double total_risk = 0.0;
};

/// Expected excess risk per iteration, split into the bias term (noiseless
/// trajectory) and the variance term (noise accumulation). The split is exact:
/// the cross term has zero expectation, so total = bias + variance.
struct RiskTrace {
  std::vector<RiskPoint> points;
  bool underflow_clamped = false;  // some recorded risk below 1e-300 clamped to 0

  /// Point recorded at iteration t; throws std::out_of_range if t was not
  /// recorded.
  const RiskPoint& at_iteration(std::size_t t) const;

  /// CSV with header "iteration,bias_risk,variance_risk,total_risk".
  /// `stride` thins the rows, always keeping the first and last.
  void write_csv(std::ostream& out, std::size_t stride = 1) const;
};

/// Exact per-eigencomponent moments of the extended iterate pair
/// (w_t - w*, w_{t-1} - w*): the mean pair (bias recursion) and the 2x2
/// second moment of the noise-driven part (variance recursion). The two
/// recursions never couple; this realizes the bias-variance split as the
/// data layout.
class ExactMomentRecursion {
 public:
  /// Starts at w0 with zero velocity, i.e. the previous iterate equals w0.
  ExactMomentRecursion(const QuadraticProblem& problem, double beta,
                       int batch_size, std::span<const double> w0);

  /// One step at rate eta: means m <- T m, second moments
  /// S <- T S T' + eta^2 (sigma^2 lambda / M) E11, per component.
  void step(double eta);

  std::size_t iteration() const { return iteration_; }
  double bias_risk() const;
  double variance_risk() const;

  /// Mean pair and symmetric second moment of component j.
  struct ComponentState {
    double m_cur = 0.0, m_prev = 0.0;   // mean of (current, previous) deviation
    double s00 = 0.0, s01 = 0.0, s11 = 0.0;  // E[x x'] of the noise part
  };
  const std::vector<ComponentState>& components() const { return state_; }

 private:
  std::vector<double> lambda_;
  std::vector<double> noise_gain_;  // (sigma^2 / M) * lambda_j
  double beta_;
  std::vector<ComponentState> state_;
  std::size_t iteration_ = 0;
  mutable std::vector<double> scratch_;
};

/// Runs the exact recursion over the whole schedule, recording iteration 0,
/// every `record_stride`-th iteration and the final one. Risks below 1e-300
/// are clamped to zero with the trace flag set.
RiskTrace exact_risk_trace(const QuadraticProblem& problem,
                           const Schedule& schedule, double beta,
                           int batch_size, std::span<const double> w0,
                           std::size_t record_stride = 1);

/// Same, recording exactly the requested iterations (all must lie in
/// [0, schedule.total_iterations()]).
RiskTrace exact_risk_trace_at(const QuadraticProblem& problem,
                              const Schedule& schedule, double beta,
                              int batch_size, std::span<const double> w0,
                              std::span<const std::size_t> iterations);

/// Convergence-theorem bound for the feasible step-decay schedule. The bias
/// side is initial_gap * exp(15 ln2 + 2 lnT + 2 ln kappa
/// - 2T/(sqrt(kappa) log_C(T sqrt(kappa)))); the variance side is
/// 4096 C^2 d sigma^2 / (M T) * ln^2(2^6 T^4) * log_C^2(T sqrt(kappa)).
/// At feasible horizons the bias exponential underflows doubles, so the log
/// values are carried alongside. Rejects infeasible (kappa, T, C), naming the
/// violated requirements.
struct Theorem2Bound {
  double bias_bound = 0.0;
  double variance_bound = 0.0;
  double log_bias_bound = 0.0;      // -inf when initial_gap = 0
  double log_variance_bound = 0.0;  // -inf when sigma2 = 0
};
Theorem2Bound theorem2_bound(const QuadraticProblem& problem, std::size_t T,
                             double C, int batch_size, double initial_gap);

/// Worst-case SGD floor (gap/2) exp(-8T/kappa); requires kappa >= 4.
double sgd_lower_bound(double f0_gap, double kappa, std::size_t T);

}  // namespace shb

#endif  // SHB_DYNAMICS_HPP
