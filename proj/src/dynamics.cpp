#include "shb/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "shb/numeric.hpp"

namespace shb {

namespace {

constexpr double kClampThreshold = 1e-300;

double clamp_risk(double value, bool& clamped) {
  if (value != 0.0 && std::fabs(value) < kClampThreshold) {
    clamped = true;
    return 0.0;
  }
  return value;
}

}  // namespace

const RiskPoint& RiskTrace::at_iteration(std::size_t t) const {
  const auto it = std::lower_bound(
      points.begin(), points.end(), t,
      [](const RiskPoint& p, std::size_t v) { return p.iteration < v; });
  if (it == points.end() || it->iteration != t)
    throw std::out_of_range("RiskTrace: iteration not recorded");
  return *it;
}

void RiskTrace::write_csv(std::ostream& out, std::size_t stride) const {
  if (stride == 0) stride = 1;
  const auto precision = out.precision(17);
  out << "iteration,bias_risk,variance_risk,total_risk\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i % stride != 0 && i + 1 != points.size()) continue;
    const RiskPoint& p = points[i];
    out << p.iteration << ',' << p.bias_risk << ',' << p.variance_risk << ','
        << p.total_risk << '\n';
  }
  out.precision(precision);
}

ExactMomentRecursion::ExactMomentRecursion(const QuadraticProblem& problem,
                                           double beta, int batch_size,
                                           std::span<const double> w0)
    : lambda_(problem.eigenvalues()), beta_(beta) {
  if (w0.size() != problem.dim())
    throw std::invalid_argument("ExactMomentRecursion: w0 dimension mismatch");
  if (!(beta >= 0.0 && beta < 1.0))
    throw std::invalid_argument("ExactMomentRecursion: beta must be in [0,1)");
  if (batch_size < 1)
    throw std::invalid_argument("ExactMomentRecursion: batch size must be >= 1");
  const double s2_eff = problem.sigma2() / static_cast<double>(batch_size);
  noise_gain_.resize(lambda_.size());
  state_.resize(lambda_.size());
  scratch_.resize(lambda_.size());
  for (std::size_t j = 0; j < lambda_.size(); ++j) {
    noise_gain_[j] = s2_eff * lambda_[j];
    const double dev = w0[j] - problem.w_star()[j];
    state_[j].m_cur = dev;
    state_[j].m_prev = dev;  // zero initial velocity
  }
}

void ExactMomentRecursion::step(double eta) {
  for (std::size_t j = 0; j < lambda_.size(); ++j) {
    ComponentState& c = state_[j];
    const double a = 1.0 + beta_ - eta * lambda_[j];  // top-left of T
    const double b = -beta_;

    const double m_new = a * c.m_cur + b * c.m_prev;
    c.m_prev = c.m_cur;
    c.m_cur = m_new;

    // S <- T S T' + eta^2 gain E11 with T = ((a, b), (1, 0)).
    const double s00 = a * (a * c.s00 + b * c.s01) + b * (a * c.s01 + b * c.s11);
    const double s01 = a * c.s00 + b * c.s01;
    const double s11 = c.s00;
    c.s00 = s00 + eta * eta * noise_gain_[j];
    c.s01 = s01;
    c.s11 = s11;
  }
  ++iteration_;
}

double ExactMomentRecursion::bias_risk() const {
  for (std::size_t j = 0; j < lambda_.size(); ++j)
    scratch_[j] = lambda_[j] * state_[j].m_cur * state_[j].m_cur;
  return 0.5 * pairwise_sum(scratch_);
}

double ExactMomentRecursion::variance_risk() const {
  for (std::size_t j = 0; j < lambda_.size(); ++j)
    scratch_[j] = lambda_[j] * state_[j].s00;
  return 0.5 * pairwise_sum(scratch_);
}

namespace {

RiskTrace run_trace(const QuadraticProblem& problem, const Schedule& schedule,
                    double beta, int batch_size, std::span<const double> w0,
                    const std::vector<std::size_t>& record_at) {
  ExactMomentRecursion rec(problem, beta, batch_size, w0);
  RiskTrace trace;
  trace.points.reserve(record_at.size());
  auto next = record_at.begin();
  const std::size_t total = schedule.total_iterations();

  auto maybe_record = [&](std::size_t t) {
    while (next != record_at.end() && *next == t) {
      RiskPoint p;
      p.iteration = t;
      p.bias_risk = clamp_risk(rec.bias_risk(), trace.underflow_clamped);
      p.variance_risk = clamp_risk(rec.variance_risk(), trace.underflow_clamped);
      p.total_risk = p.bias_risk + p.variance_risk;
      trace.points.push_back(p);
      ++next;
    }
  };

  maybe_record(0);
  for (std::size_t t = 0; t < total && next != record_at.end(); ++t) {
    rec.step(schedule.eta_at(t));
    maybe_record(t + 1);
  }
  return trace;
}

}  // namespace

RiskTrace exact_risk_trace(const QuadraticProblem& problem,
                           const Schedule& schedule, double beta,
                           int batch_size, std::span<const double> w0,
                           std::size_t record_stride) {
  if (record_stride == 0) record_stride = 1;
  const std::size_t total = schedule.total_iterations();
  std::vector<std::size_t> record_at;
  for (std::size_t t = 0; t <= total; t += record_stride) record_at.push_back(t);
  if (record_at.back() != total) record_at.push_back(total);
  return run_trace(problem, schedule, beta, batch_size, w0, record_at);
}

RiskTrace exact_risk_trace_at(const QuadraticProblem& problem,
                              const Schedule& schedule, double beta,
                              int batch_size, std::span<const double> w0,
                              std::span<const std::size_t> iterations) {
  if (iterations.empty())
    throw std::invalid_argument("exact_risk_trace_at: no iterations requested");
  std::vector<std::size_t> record_at(iterations.begin(), iterations.end());
  std::sort(record_at.begin(), record_at.end());
  record_at.erase(std::unique(record_at.begin(), record_at.end()),
                  record_at.end());
  if (record_at.back() > schedule.total_iterations())
    throw std::invalid_argument(
        "exact_risk_trace_at: requested iteration past the schedule horizon");
  return run_trace(problem, schedule, beta, batch_size, w0, record_at);
}

Theorem2Bound theorem2_bound(const QuadraticProblem& problem, std::size_t T,
                             double C, int batch_size, double initial_gap) {
  if (batch_size < 1)
    throw std::invalid_argument("theorem2_bound: batch size must be >= 1");
  if (!(initial_gap >= 0.0))
    throw std::invalid_argument("theorem2_bound: initial gap must be >= 0");
  const double kappa = problem.condition_number();
  const auto ts = theorem_step_decay(kappa, problem.largest_eigenvalue(), T, C);
  if (!ts.report.feasible) {
    std::string msg = "theorem2_bound: schedule requirements violated:";
    for (const auto& v : ts.report.violated) msg += " " + v;
    throw std::invalid_argument(msg);
  }

  const double t = static_cast<double>(T);
  const double root_kappa = std::sqrt(kappa);
  const double log_stages = std::log(t * root_kappa) / std::log(C);
  const double ln2 = std::log(2.0);

  const double exponent = 15.0 * ln2 + 2.0 * std::log(t) +
                          2.0 * std::log(kappa) -
                          2.0 * t / (root_kappa * log_stages);
  Theorem2Bound bound;
  bound.log_bias_bound = std::log(initial_gap) + exponent;  // -inf at gap 0
  bound.bias_bound = initial_gap * std::exp(exponent);

  const double d = static_cast<double>(problem.dim());
  const double sigma2 = problem.sigma2();
  const double m = static_cast<double>(batch_size);
  const double log_term = std::log(std::pow(2.0, 6) * std::pow(t, 4));
  bound.variance_bound = 4096.0 * C * C * d * sigma2 / (m * t) * log_term *
                         log_term * log_stages * log_stages;
  bound.log_variance_bound =
      std::log(4096.0 * C * C * d / (m * t)) + std::log(sigma2) +
      2.0 * std::log(log_term) + 2.0 * std::log(log_stages);
  return bound;
}

double sgd_lower_bound(double f0_gap, double kappa, std::size_t T) {
  if (!(kappa >= 4.0))
    throw std::invalid_argument("sgd_lower_bound: kappa must be >= 4");
  if (!(f0_gap >= 0.0))
    throw std::invalid_argument("sgd_lower_bound: gap must be >= 0");
  return 0.5 * f0_gap * std::exp(-8.0 * static_cast<double>(T) / kappa);
}

}  // namespace shb
