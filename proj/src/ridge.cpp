#include "shb/ridge.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "shb/numeric.hpp"
#include "shb/rng.hpp"
#include "shb/schedule.hpp"

namespace shb {

namespace {

constexpr std::uint64_t kInitStream = 11;
constexpr std::uint64_t kShuffleStream = 13;

struct GridPoint {
  double eta0 = 0.0;
  double gamma = 0.0;  // 0 = constant
  int n_stages = 0;    // 0 = constant
};

struct RunSpec {
  bool momentum = false;
  bool step_decay = false;
  int batch_size = 0;
  std::size_t seed_index = 0;
  GridPoint grid;
};

double ridge_objective(const SparseDataset& data, double alpha,
                       const std::vector<double>& w) {
  double sq = 0.0;
  for (std::size_t i = 0; i < data.n_samples(); ++i) {
    double dot = 0.0;
    for (const auto& [idx, val] : data.rows[i]) dot += val * w[idx];
    const double resid = dot - data.labels[i];
    sq += resid * resid;
  }
  double reg = 0.0;
  for (double c : w) reg += c * c;
  return sq / static_cast<double>(data.n_samples()) + alpha * reg;
}

/// One optimizer run over the full epoch loop; returns the final objective
/// gap (inf for diverged runs so grid search skips them).
double run_one(const SparseDataset& data, const RidgeExperimentConfig& config,
               const RunSpec& spec, const std::vector<double>& w0,
               double optimum) {
  const std::size_t n = data.n_samples();
  const std::size_t d = static_cast<std::size_t>(data.n_features);
  const auto batch = static_cast<std::size_t>(spec.batch_size);
  const std::size_t steps_per_epoch = (n + batch - 1) / batch;
  const std::size_t total =
      steps_per_epoch * static_cast<std::size_t>(config.epochs);

  const Schedule schedule =
      spec.step_decay
          ? step_decay_schedule(spec.grid.eta0, spec.grid.gamma,
                                static_cast<std::size_t>(spec.grid.n_stages),
                                total)
          : constant_schedule(spec.grid.eta0, total);

  std::mt19937_64 shuffle_rng =
      make_stream(config.seeds[spec.seed_index], kShuffleStream);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> w = w0;
  std::vector<double> v(d, 0.0);
  std::vector<double> grad(d, 0.0);
  std::size_t t = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (std::size_t start = 0; start < n; start += batch, ++t) {
      const std::size_t stop = std::min(start + batch, n);
      const double inv = 2.0 / static_cast<double>(stop - start);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t b = start; b < stop; ++b) {
        const auto& row = data.rows[order[b]];
        double dot = 0.0;
        for (const auto& [idx, val] : row) dot += val * w[idx];
        const double coeff = inv * (dot - data.labels[order[b]]);
        for (const auto& [idx, val] : row) grad[idx] += coeff * val;
      }
      const double eta = schedule.eta_at(t);
      if (spec.momentum) {
        for (std::size_t j = 0; j < d; ++j) {
          const double g = grad[j] + 2.0 * config.alpha * w[j];
          v[j] = config.beta * v[j] + eta * g;
          w[j] -= v[j];
        }
      } else {
        for (std::size_t j = 0; j < d; ++j) {
          const double g = grad[j] + 2.0 * config.alpha * w[j];
          w[j] -= eta * g;
        }
      }
    }
  }
  const double gap = ridge_objective(data, config.alpha, w) - optimum;
  return std::isfinite(gap) ? gap : std::numeric_limits<double>::infinity();
}

}  // namespace

RidgeExperimentResult run_ridge_experiment(
    const SparseDataset& dataset, const RidgeExperimentConfig& config) {
  if (dataset.n_samples() == 0 || dataset.n_features < 1)
    throw std::invalid_argument("run_ridge_experiment: empty dataset");
  if (config.seeds.empty() || config.batch_sizes.empty() ||
      config.eta0_grid.empty() || config.gamma_grid.empty() ||
      config.n_stage_grid.empty())
    throw std::invalid_argument("run_ridge_experiment: empty grid");

  const auto d = static_cast<std::size_t>(dataset.n_features);
  const double n = static_cast<double>(dataset.n_samples());

  // Closed-form optimum w* = (X'X + n alpha I)^{-1} X'Y.
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd xty = Eigen::VectorXd::Zero(d);
  for (std::size_t i = 0; i < dataset.n_samples(); ++i) {
    for (const auto& [a, va] : dataset.rows[i]) {
      xty(a) += va * dataset.labels[i];
      for (const auto& [b, vb] : dataset.rows[i]) gram(a, b) += va * vb;
    }
  }
  if (config.alpha == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.eigenvalues()(0) <=
        1e-12 * std::max(1.0, eig.eigenvalues()(d - 1)))
      throw std::invalid_argument(
          "run_ridge_experiment: alpha = 0 with rank-deficient X'X has no "
          "unique optimum");
  }
  Eigen::MatrixXd reg = gram;
  reg.diagonal().array() += n * config.alpha;
  const Eigen::VectorXd w_star = reg.ldlt().solve(xty);
  const std::vector<double> w_star_v(w_star.data(), w_star.data() + d);
  const double optimum = ridge_objective(
      dataset, config.alpha, w_star_v);

  // One shared initialization per seed, uniform (-1, 1)^d.
  std::vector<std::vector<double>> inits(config.seeds.size());
  for (std::size_t s = 0; s < config.seeds.size(); ++s) {
    std::mt19937_64 rng = make_stream(config.seeds[s], kInitStream);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    inits[s].resize(d);
    for (double& c : inits[s]) c = uniform(rng);
  }

  std::vector<GridPoint> constant_grid;
  for (double eta0 : config.eta0_grid) constant_grid.push_back({eta0, 0.0, 0});
  std::vector<GridPoint> step_grid;
  for (double eta0 : config.eta0_grid)
    for (double gamma : config.gamma_grid)
      for (int n_stages : config.n_stage_grid)
        step_grid.push_back({eta0, gamma, n_stages});

  std::vector<RunSpec> specs;
  for (int batch : config.batch_sizes)
    for (std::size_t s = 0; s < config.seeds.size(); ++s)
      for (bool momentum : {false, true})
        for (bool step : {false, true})
          for (const GridPoint& g : step ? step_grid : constant_grid)
            specs.push_back({momentum, step, batch, s, g});

  std::vector<double> gaps(specs.size());
  parallel_for(specs.size(), config.threads, [&](std::size_t i) {
    gaps[i] = run_one(dataset, config, specs[i], inits[specs[i].seed_index],
                      optimum);
  });

  // Best grid point per (method, schedule, batch, seed).
  RidgeExperimentResult result;
  result.optimum_value = optimum;
  for (int batch : config.batch_sizes) {
    for (bool momentum : {false, true}) {
      for (bool step : {false, true}) {
        for (std::size_t s = 0; s < config.seeds.size(); ++s) {
          RidgeRunRow row;
          row.method = momentum ? "shb" : "sgd";
          row.schedule = step ? "step" : "constant";
          row.batch_size = batch;
          row.seed = config.seeds[s];
          row.final_gap = std::numeric_limits<double>::infinity();
          for (std::size_t i = 0; i < specs.size(); ++i) {
            const RunSpec& spec = specs[i];
            if (spec.momentum != momentum || spec.step_decay != step ||
                spec.batch_size != batch || spec.seed_index != s)
              continue;
            if (gaps[i] < row.final_gap) {
              row.final_gap = gaps[i];
              row.best_eta0 = spec.grid.eta0;
              row.best_gamma = spec.grid.gamma;
              row.best_n_stages = spec.grid.n_stages;
            }
          }
          result.rows.push_back(row);
        }
        RidgeSummaryRow summary;
        summary.method = momentum ? "shb" : "sgd";
        summary.schedule = step ? "step" : "constant";
        summary.batch_size = batch;
        summary.n_seeds = static_cast<long>(config.seeds.size());
        std::vector<double> values;
        for (const RidgeRunRow& row : result.rows) {
          if (row.method == summary.method &&
              row.schedule == summary.schedule &&
              row.batch_size == batch)
            values.push_back(row.final_gap);
        }
        const double mean =
            pairwise_sum(values) / static_cast<double>(values.size());
        double var = 0.0;
        if (values.size() > 1) {
          std::vector<double> sq(values.size());
          for (std::size_t i = 0; i < values.size(); ++i) {
            const double dev = values[i] - mean;
            sq[i] = dev * dev;
          }
          var = pairwise_sum(sq) / static_cast<double>(values.size() - 1);
        }
        summary.mean_gap = mean;
        summary.std_gap = std::sqrt(var);
        result.summary.push_back(summary);
      }
    }
  }
  return result;
}

void write_ridge_rows_csv(const RidgeExperimentResult& result,
                          std::ostream& out) {
  const auto precision = out.precision(17);
  out << "method,schedule,M,seed,best_eta0,best_gamma,best_n,final_gap\n";
  for (const RidgeRunRow& row : result.rows) {
    out << row.method << ',' << row.schedule << ',' << row.batch_size << ','
        << row.seed << ',' << row.best_eta0 << ',' << row.best_gamma << ','
        << row.best_n_stages << ',' << row.final_gap << '\n';
  }
  out.precision(precision);
}

void write_ridge_summary_csv(const RidgeExperimentResult& result,
                             std::ostream& out) {
  const auto precision = out.precision(17);
  out << "method,schedule,M,mean_gap,std_gap,n_seeds\n";
  for (const RidgeSummaryRow& row : result.summary) {
    out << row.method << ',' << row.schedule << ',' << row.batch_size << ','
        << row.mean_gap << ',' << row.std_gap << ',' << row.n_seeds << '\n';
  }
  out.precision(precision);
}

}  // namespace shb
