#include "shb/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shb {

namespace {

double log_base(double base, double x) { return std::log(x) / std::log(base); }

}  // namespace

Schedule::Schedule(std::vector<double> stage_rates,
                   std::vector<std::size_t> stage_lengths)
    : rates_(std::move(stage_rates)), lengths_(std::move(stage_lengths)) {
  if (rates_.empty() || rates_.size() != lengths_.size())
    throw std::invalid_argument("Schedule: rates/lengths size mismatch");
  total_ = 0;
  stage_end_.reserve(lengths_.size());
  for (std::size_t l = 0; l < lengths_.size(); ++l) {
    if (!(rates_[l] > 0.0) || !std::isfinite(rates_[l]))
      throw std::invalid_argument("Schedule: rates must be positive");
    if (lengths_[l] == 0)
      throw std::invalid_argument("Schedule: stage lengths must be positive");
    total_ += lengths_[l];
    stage_end_.push_back(total_);
  }
}

double Schedule::eta_at(std::size_t t) const {
  if (t >= total_)
    throw std::out_of_range("Schedule::eta_at: iteration past horizon");
  const auto it = std::upper_bound(stage_end_.begin(), stage_end_.end(), t);
  return rates_[static_cast<std::size_t>(it - stage_end_.begin())];
}

double Schedule::max_rate() const {
  return *std::max_element(rates_.begin(), rates_.end());
}

Schedule constant_schedule(double eta, std::size_t T) {
  if (T == 0) throw std::invalid_argument("constant_schedule: T must be >= 1");
  return Schedule({eta}, {T});
}

Schedule step_decay_schedule(double eta0, double gamma, std::size_t n,
                             std::size_t T) {
  if (n == 0) throw std::invalid_argument("step_decay_schedule: n must be >= 1");
  if (T < n)
    throw std::invalid_argument("step_decay_schedule: T must be >= n");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("step_decay_schedule: gamma must be in (0,1)");
  std::vector<double> rates(n);
  std::vector<std::size_t> lengths(n, T / n);
  lengths.back() += T - (T / n) * n;
  double rate = eta0;
  for (std::size_t l = 0; l < n; ++l) {
    rates[l] = rate;
    rate *= gamma;
  }
  return Schedule(std::move(rates), std::move(lengths));
}

bool theorem_iteration_requirement(std::size_t T, double kappa, double C) {
  if (T < 2) return false;  // log_C(T^2) vanishes at T = 1
  const double t = static_cast<double>(T);
  const double denom = std::log(std::pow(2.0, 14) * std::pow(t, 8)) *
                       std::log(std::pow(2.0, 6) * std::pow(t, 4)) *
                       log_base(C, t * t);
  return t / denom >= 2.0 * C * std::sqrt(kappa);
}

double theorem_momentum(double kappa) {
  const double r = 1.0 - 1.0 / std::sqrt(kappa);
  return r * r;
}

double theorem_aux_h(std::size_t T, double kappa, double C) {
  const double t = static_cast<double>(T);
  return 4.0 * std::log(std::pow(2.0, 6) * std::pow(t, 4)) *
         log_base(C, t * std::sqrt(kappa));
}

TheoremSchedule theorem_step_decay(double kappa, double L, std::size_t T,
                                   double C) {
  if (!(kappa >= 4.0))
    throw std::invalid_argument("theorem_step_decay: kappa must be >= 4");
  if (!(L > 0.0))
    throw std::invalid_argument("theorem_step_decay: L must be > 0");
  if (T == 0) throw std::invalid_argument("theorem_step_decay: T must be >= 1");
  const double t = static_cast<double>(T);
  const double root_kappa = std::sqrt(kappa);
  if (!(C > 1.0) || C > t * root_kappa)
    throw std::invalid_argument(
        "theorem_step_decay: decay factor must satisfy 1 < C <= T sqrt(kappa)");

  TheoremScheduleReport report;
  report.C = C;
  report.beta = theorem_momentum(kappa);
  report.h = theorem_aux_h(T, kappa, C);
  report.exact_stage_count = log_base(C, t * root_kappa);

  // K = T / log_C(T sqrt(kappa)) has no integral guarantee; round the stage
  // count up and give the remainder to the smallest-rate stage. Stage count
  // is clamped to T so every stage runs at least one iteration.
  auto n = static_cast<std::size_t>(std::ceil(report.exact_stage_count));
  n = std::max<std::size_t>(1, std::min(n, T));
  report.n = n;
  report.K = T / n;
  report.stage_count_rounded =
      std::ceil(report.exact_stage_count) != report.exact_stage_count ||
      static_cast<double>(report.K) * static_cast<double>(n) != t;

  std::vector<double> rates(n);
  std::vector<std::size_t> lengths(n, report.K);
  lengths.back() += T - report.K * n;
  double rate = 1.0 / L;
  for (std::size_t l = 0; l < n; ++l) {
    rates[l] = rate;
    rate /= C;
  }
  Schedule schedule(std::move(rates), std::move(lengths));

  report.req_decay_factor = C > 1.0 && C <= t * root_kappa;
  report.req_stage_rates =
      schedule.stage_rates().front() == 1.0 / L;  // ratios are exact 1/C by construction
  report.req_stage_length = report.K == T / report.n;
  report.req_iterations_lhs =
      t / (std::log(std::pow(2.0, 14) * std::pow(t, 8)) *
           std::log(std::pow(2.0, 6) * std::pow(t, 4)) * log_base(C, t * t));
  if (T < 2) report.req_iterations_lhs = 0.0;
  report.req_iterations_rhs = 2.0 * C * root_kappa;
  report.req_iterations = theorem_iteration_requirement(T, kappa, C);

  if (!report.req_decay_factor) report.violated.emplace_back("req_C");
  if (!report.req_stage_rates) report.violated.emplace_back("req_var_eta_1");
  if (!report.req_stage_length) report.violated.emplace_back("req_var_k_l");
  if (!report.req_iterations) report.violated.emplace_back("req_var_T");
  report.feasible = report.violated.empty();

  return {std::move(schedule), std::move(report)};
}

std::size_t min_feasible_T(double kappa, double C) {
  if (!(kappa >= 4.0))
    throw std::invalid_argument("min_feasible_T: kappa must be >= 4");
  if (!(C > 1.0)) throw std::invalid_argument("min_feasible_T: C must be > 1");
  std::size_t hi = 2;
  while (!theorem_iteration_requirement(hi, kappa, C)) {
    if (hi > (std::size_t{1} << 62))
      throw std::runtime_error("min_feasible_T: no feasible T found");
    hi *= 2;
  }
  std::size_t lo = hi / 2;  // requirement known false here (or hi == 2)
  while (lo + 1 < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (theorem_iteration_requirement(mid, kappa, C))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace shb
