#ifndef SHB_SIMULATE_HPP
#define SHB_SIMULATE_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "shb/problem.hpp"
#include "shb/schedule.hpp"

namespace shb {

enum class Method { Sgd, Shb };

/// One stochastic experiment: problem + schedule + momentum + noise model,
/// replicated `replications` times from independent substreams of `seed`.
/// Replications are embarrassingly parallel; results are identical for any
/// `threads` value.
struct RunConfig {
  QuadraticProblem problem;
  Schedule schedule;
  double beta = 0.0;
  NoiseModel noise{};
  std::vector<double> w0;
  std::uint64_t seed = 20240817ull;
  long replications = 1;
  std::vector<std::size_t> checkpoints;  // default: {0, T}
  bool record_mean_trajectory = false;
  int threads = 1;
};

struct EmpiricalRisk {
  std::vector<std::size_t> checkpoints;
  std::vector<double> mean;  // mean excess risk per checkpoint
  std::vector<double> se;    // sample std / sqrt(replications)
  long replications = 0;
  std::vector<double> mean_trajectory;  // per-iteration mean risk, if recorded

  /// CSV with header "checkpoint,mean,se,n".
  void write_csv(std::ostream& out) const;
};

/// Heavy ball: v <- beta v + eta_t (grad - noise), w <- w - v, from v0 = 0.
EmpiricalRisk run_shb(const RunConfig& config);

/// Plain SGD: w <- w - eta_t (grad - noise). Consumes the noise stream in the
/// same order as run_shb, so beta = 0 heavy ball matches it bit for bit under
/// a shared seed.
EmpiricalRisk run_sgd(const RunConfig& config);

struct RaceResult {
  bool reached = false;
  std::size_t iterations = 0;  // meaningful when reached
  std::size_t horizon = 0;     // schedule length searched
};

/// Smallest t with total_risk(t) <= target_ratio * total_risk(0) under the
/// exact noiseless recursion (requires sigma2 = 0). Sgd forces beta = 0.
RaceResult iterations_to_target(const QuadraticProblem& problem, Method method,
                                const Schedule& schedule, double beta,
                                double target_ratio);

}  // namespace shb

#endif  // SHB_SIMULATE_HPP
