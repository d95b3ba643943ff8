#ifndef SHB_RIDGE_HPP
#define SHB_RIDGE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "shb/libsvm.hpp"

namespace shb {

/// Grid-search configuration for the ridge experiment. Defaults mirror the
/// hyperparameter table: eta0 over four decades, step decay with
/// gamma in {1/2, 1/4, 1/8} and 2-5 stages, beta = 0.9 for heavy ball.
struct RidgeExperimentConfig {
  double alpha = 1e-3;
  std::vector<int> batch_sizes = {512, 128, 32, 8};
  int epochs = 100;
  std::vector<double> eta0_grid = {1.0, 0.1, 0.01, 0.001};
  std::vector<double> gamma_grid = {0.5, 0.25, 0.125};
  std::vector<int> n_stage_grid = {2, 3, 4, 5};
  double beta = 0.9;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  int threads = 1;
};

struct RidgeRunRow {
  std::string method;    // "sgd" | "shb"
  std::string schedule;  // "constant" | "step"
  int batch_size = 0;
  std::uint64_t seed = 0;
  double best_eta0 = 0.0;
  double best_gamma = 0.0;  // 0 for constant
  int best_n_stages = 0;    // 0 for constant
  double final_gap = 0.0;   // best f(w_T) - f(w*) over the grid
};

struct RidgeSummaryRow {
  std::string method;
  std::string schedule;
  int batch_size = 0;
  double mean_gap = 0.0;
  double std_gap = 0.0;
  long n_seeds = 0;
};

struct RidgeExperimentResult {
  std::vector<RidgeRunRow> rows;
  std::vector<RidgeSummaryRow> summary;
  double optimum_value = 0.0;  // f(w*) from the closed form
};

/// Runs SGD and heavy ball under constant and step-decay schedules over the
/// full hyperparameter grid, with per-epoch reshuffling and the final partial
/// batch kept (T = epochs * ceil(n/M)). Per (method, schedule, batch, seed)
/// the best final gap over the grid is reported; the summary aggregates
/// mean +- std over seeds. Gradients are the true per-sample ridge gradients.
RidgeExperimentResult run_ridge_experiment(const SparseDataset& dataset,
                                           const RidgeExperimentConfig& config);

void write_ridge_rows_csv(const RidgeExperimentResult& result,
                          std::ostream& out);
void write_ridge_summary_csv(const RidgeExperimentResult& result,
                             std::ostream& out);

}  // namespace shb

#endif  // SHB_RIDGE_HPP
