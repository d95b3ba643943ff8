#ifndef SHB_LEMMA_CHECKS_HPP
#define SHB_LEMMA_CHECKS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shb/schedule.hpp"

namespace shb {

/// Outcome of one verifier: how many elementary assertions ran, how many
/// failed, and the worst witness (inputs plus both sides) when any failed.
/// `applicable = false` marks a gated check whose preconditions did not hold;
/// it neither passes nor fails the inequality itself.
struct CheckReport {
  std::string name;
  long trials = 0;
  long failures = 0;
  bool applicable = true;
  std::string worst_witness;  // JSON; populated whenever failures > 0
  double worst_margin = 0.0;  // most negative (rhs - lhs) seen, loss units

  bool passed() const { return failures == 0; }
  void merge(const CheckReport& other);
};

struct CheckOptions {
  /// Scales every right-hand side before the slack is applied. Exists as a
  /// failure-path hook: a value < 1 makes a true inequality report a witness.
  double rhs_scale = 1.0;
};

/// Power-norm bound |T^k|_F <= min(8k, 8/sqrt|disc|) rho^k for beta >= 1/4.
/// In the complex regime only the 8k branch applies. The power is evaluated
/// by repeated multiplication with log-scale bookkeeping.
CheckReport check_power_norm_bound(double beta, double eta_lambda, long k,
                                   const CheckOptions& opts = {});

/// Perturbed-product bound |(T+D_1)...(T+D_k)|_F <= |(T+D_max)^k|_F for
/// D_i = diag(delta_i, 0), delta_i >= 0, base T with nonnegative
/// discriminant; also asserts the sign structure of every partial product
/// (first column >= -1e-12, second column <= 1e-12).
CheckReport check_product_monotonicity(double beta, double eta_lambda,
                                       std::span<const double> deltas,
                                       const CheckOptions& opts = {});

/// Nonincreasing-rate segment bound
/// |T_1 T_2 ... T_k|_2 <= min(8k, 8/sqrt|disc_k|) rho(T_k)^k for
/// beta in [1/4, 1). The segment's largest-rate (first) matrix must lie in
/// the real-eigenvalue regime, which makes the whole segment real; segments
/// violating that are reported not-applicable.
CheckReport check_combined_bound(
    std::span<const std::pair<double, double>> segment_eta_lambda, double beta,
    const CheckOptions& opts = {});

/// Stage contraction |T^K|_2 <= 1 in the complex regime with
/// beta = (1 - 1/sqrt(kappa))^2 and K >= sqrt(kappa) ln(8T). Inputs outside
/// those gates are reported not-applicable. Also cross-checks the scalar
/// chain 8K beta^(K/2) <= 1 => matrix norm <= 1.
CheckReport check_stage_contraction(double beta, double eta_lambda,
                                    std::size_t K, std::size_t T, double kappa,
                                    const CheckOptions& opts = {});

/// sqrt(1-x) <= 1 - x/2 on a grid over [0,1] and (1 - 1/x)^x <= 1/e on a
/// log grid over [1, 1e6].
CheckReport check_aux_inequalities(std::size_t grid_size,
                                   const CheckOptions& opts = {});

/// Worst-case SGD floor: on the counterexample instance, for every schedule
/// with rates <= 2/L (violations rejected), the exact noiseless risk at the
/// schedule horizon is >= (gap/2) exp(-8T/kappa).
CheckReport check_theorem1(double kappa, double L, double c0,
                           std::span<const Schedule> schedules,
                           const CheckOptions& opts = {});

/// Convergence-theorem bound: with the feasible theorem schedule and a
/// spectrum spanning [mu, L] (endpoints plus log-uniform interior), the exact
/// bias and variance risks at T are below the respective bounds. Infeasible
/// parameters give a not-applicable report naming the violated requirements.
CheckReport check_theorem2(double kappa, double C, std::size_t T,
                           std::size_t d, double sigma2, int batch_size,
                           double w0_gap, const CheckOptions& opts = {});

/// Eigenvalue spectrum used by check_theorem2: {L, interior log-uniform, mu}.
std::vector<double> spanning_spectrum(double L, double mu, std::size_t d);

struct SuiteOptions {
  std::uint64_t seed = 20240817ull;
  long trials = 0;  // 0 = suite default
  CheckOptions check;
};

// Randomized/grid suites aggregating the elementary checks. Deterministic
// given the seed; samplers stay inside each lemma's stated preconditions.
CheckReport run_power_norm_suite(const SuiteOptions& opts = {});
CheckReport run_product_monotonicity_suite(const SuiteOptions& opts = {});
CheckReport run_combined_bound_suite(const SuiteOptions& opts = {});
CheckReport run_stage_contraction_suite(const SuiteOptions& opts = {});
CheckReport run_aux_inequalities_suite(const SuiteOptions& opts = {});
CheckReport run_theorem1_suite(const SuiteOptions& opts = {});
CheckReport run_theorem2_suite(const SuiteOptions& opts = {});

const std::vector<std::string>& check_names();
CheckReport run_check_by_name(const std::string& name,
                              const SuiteOptions& opts = {});

}  // namespace shb

#endif  // SHB_LEMMA_CHECKS_HPP
