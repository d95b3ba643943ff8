#include "shb/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "shb/dynamics.hpp"
#include "shb/numeric.hpp"
#include "shb/rng.hpp"

namespace shb {

namespace {

std::vector<std::size_t> resolve_checkpoints(const RunConfig& config) {
  const std::size_t total = config.schedule.total_iterations();
  std::vector<std::size_t> cps = config.checkpoints;
  if (cps.empty()) {
    // Default thinning: every iteration for short runs, otherwise about 100
    // geometrically spaced checkpoints.
    cps.push_back(0);
    if (total <= 100) {
      for (std::size_t t = 1; t <= total; ++t) cps.push_back(t);
    } else {
      const double log_total = std::log(static_cast<double>(total));
      for (int k = 0; k < 100; ++k) {
        cps.push_back(static_cast<std::size_t>(
            std::llround(std::exp(log_total * (k + 1) / 100.0))));
      }
      cps.push_back(total);
    }
  }
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  if (cps.back() > total)
    throw std::invalid_argument("RunConfig: checkpoint past the horizon");
  return cps;
}

void validate(const RunConfig& config) {
  if (config.w0.size() != config.problem.dim())
    throw std::invalid_argument("RunConfig: w0 dimension mismatch");
  if (config.replications < 1)
    throw std::invalid_argument("RunConfig: replications must be >= 1");
  if (!(config.beta >= 0.0 && config.beta < 1.0))
    throw std::invalid_argument("RunConfig: beta must be in [0,1)");
  if (config.noise.batch_size < 1)
    throw std::invalid_argument("RunConfig: batch size must be >= 1");
}

/// One replication; writes the risk at each checkpoint into `risk_out` and,
/// when requested, the per-iteration risk into `trajectory_out`.
void run_replication(const RunConfig& config, bool momentum,
                     const std::vector<std::size_t>& cps, std::uint64_t rep,
                     double* risk_out, double* trajectory_out) {
  const auto& lambda = config.problem.eigenvalues();
  const auto& w_star = config.problem.w_star();
  const std::size_t d = config.problem.dim();
  const std::size_t total = config.schedule.total_iterations();

  std::mt19937_64 rng = make_stream(config.seed, rep);
  std::vector<double> w = config.w0;
  std::vector<double> v(d, 0.0);
  std::vector<double> noise;

  std::size_t next_cp = 0;
  auto record = [&](std::size_t t) {
    const bool at_cp = next_cp < cps.size() && cps[next_cp] == t;
    if (trajectory_out == nullptr && !at_cp) return;
    const double risk = excess_risk(config.problem, w);
    if (trajectory_out != nullptr) trajectory_out[t] = risk;
    if (at_cp) {
      risk_out[next_cp] = risk;
      ++next_cp;
    }
  };

  record(0);
  for (std::size_t t = 0; t < total; ++t) {
    const double eta = config.schedule.eta_at(t);
    config.noise.sample(config.problem, rng, noise);
    if (momentum) {
      for (std::size_t j = 0; j < d; ++j) {
        const double g = lambda[j] * (w[j] - w_star[j]) - noise[j];
        v[j] = config.beta * v[j] + eta * g;
        w[j] -= v[j];
      }
    } else {
      for (std::size_t j = 0; j < d; ++j) {
        const double g = lambda[j] * (w[j] - w_star[j]) - noise[j];
        w[j] -= eta * g;
      }
    }
    record(t + 1);
  }
}

EmpiricalRisk run(const RunConfig& config, bool momentum) {
  validate(config);
  const std::vector<std::size_t> cps = resolve_checkpoints(config);
  const auto reps = static_cast<std::size_t>(config.replications);
  const std::size_t total = config.schedule.total_iterations();

  // Per-replication slots keep aggregation independent of the worker count.
  std::vector<double> risks(reps * cps.size());
  std::vector<double> trajectories;
  if (config.record_mean_trajectory)
    trajectories.resize(reps * (total + 1));

  parallel_for(reps, config.threads, [&](std::size_t r) {
    double* traj = config.record_mean_trajectory
                       ? trajectories.data() + r * (total + 1)
                       : nullptr;
    run_replication(config, momentum, cps, r, risks.data() + r * cps.size(),
                    traj);
  });

  EmpiricalRisk result;
  result.checkpoints = cps;
  result.replications = config.replications;
  result.mean.resize(cps.size());
  result.se.resize(cps.size());
  std::vector<double> column(reps);
  for (std::size_t c = 0; c < cps.size(); ++c) {
    for (std::size_t r = 0; r < reps; ++r) column[r] = risks[r * cps.size() + c];
    const double mean = pairwise_sum(column) / static_cast<double>(reps);
    result.mean[c] = mean;
    if (reps > 1) {
      std::vector<double> sq(reps);
      for (std::size_t r = 0; r < reps; ++r) {
        const double dev = column[r] - mean;
        sq[r] = dev * dev;
      }
      const double var =
          pairwise_sum(sq) / static_cast<double>(reps - 1);
      result.se[c] = std::sqrt(var / static_cast<double>(reps));
    } else {
      result.se[c] = 0.0;
    }
  }

  if (config.record_mean_trajectory) {
    result.mean_trajectory.resize(total + 1);
    for (std::size_t t = 0; t <= total; ++t) {
      for (std::size_t r = 0; r < reps; ++r)
        column[r] = trajectories[r * (total + 1) + t];
      result.mean_trajectory[t] =
          pairwise_sum(column) / static_cast<double>(reps);
    }
  }
  return result;
}

}  // namespace

void EmpiricalRisk::write_csv(std::ostream& out) const {
  const auto precision = out.precision(17);
  out << "checkpoint,mean,se,n\n";
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    out << checkpoints[c] << ',' << mean[c] << ',' << se[c] << ','
        << replications << '\n';
  }
  out.precision(precision);
}

EmpiricalRisk run_shb(const RunConfig& config) { return run(config, true); }

EmpiricalRisk run_sgd(const RunConfig& config) { return run(config, false); }

RaceResult iterations_to_target(const QuadraticProblem& problem, Method method,
                                const Schedule& schedule, double beta,
                                double target_ratio) {
  if (problem.sigma2() != 0.0)
    throw std::invalid_argument(
        "iterations_to_target: bias-only race requires sigma2 = 0");
  if (!(target_ratio > 0.0 && target_ratio <= 1.0))
    throw std::invalid_argument(
        "iterations_to_target: target ratio must be in (0,1]");
  const double effective_beta = method == Method::Sgd ? 0.0 : beta;
  std::vector<double> w0(problem.dim(), 0.0);
  for (std::size_t j = 0; j < problem.dim(); ++j)
    w0[j] = problem.w_star()[j] + 1.0;

  ExactMomentRecursion rec(problem, effective_beta, 1, w0);
  const double initial = rec.bias_risk();
  const std::size_t horizon = schedule.total_iterations();
  if (initial == 0.0) return {true, 0, horizon};
  const double target = target_ratio * initial;
  if (initial <= target) return {true, 0, horizon};
  for (std::size_t t = 0; t < horizon; ++t) {
    rec.step(schedule.eta_at(t));
    if (rec.bias_risk() <= target) return {true, t + 1, horizon};
  }
  return {false, 0, horizon};
}

}  // namespace shb
