#ifndef SHB_PROBLEM_HPP
#define SHB_PROBLEM_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace shb {

/// Quadratic objective f(w) = 1/2 w'Hw - b'w represented in the eigenbasis of
/// the expected Hessian: a nonincreasing positive spectrum, the optimum in
/// eigen-coordinates, and the gradient-noise scale sigma^2. Immutable after
/// construction and safe to share across workers.
class QuadraticProblem {
 public:
  /// `eigenvalues` must be nonempty, strictly positive and nonincreasing;
  /// `w_star` defaults to the origin. Throws std::invalid_argument otherwise.
  QuadraticProblem(std::vector<double> eigenvalues, double sigma2,
                   std::vector<double> w_star = {});

  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  const std::vector<double>& w_star() const { return w_star_; }
  double sigma2() const { return sigma2_; }
  std::size_t dim() const { return eigenvalues_.size(); }

  double largest_eigenvalue() const { return eigenvalues_.front(); }
  double smallest_eigenvalue() const { return eigenvalues_.back(); }
  double condition_number() const {
    return eigenvalues_.front() / eigenvalues_.back();
  }

 private:
  std::vector<double> eigenvalues_;
  double sigma2_;
  std::vector<double> w_star_;
};

/// Excess risk f(w) - f(w*) = 1/2 sum_j lambda_j (w_j - w*_j)^2.
/// Rejects dimension mismatches.
double excess_risk(const QuadraticProblem& problem, std::span<const double> w);

enum class NoiseKind { None, AnisotropicGaussian };

/// Per-step gradient noise in eigen-coordinates. AnisotropicGaussian draws
/// independent components of variance sigma^2 lambda_j / M, i.e. covariance
/// exactly (sigma^2 / M) H, so the exact-risk recursion is an equality rather
/// than an upper bound. None always yields the zero vector.
struct NoiseModel {
  NoiseKind kind = NoiseKind::AnisotropicGaussian;
  int batch_size = 1;  // M

  NoiseModel() = default;
  NoiseModel(NoiseKind k, int m);

  /// Samples one noise vector into `out` (resized to problem.dim()).
  /// Consumes problem.dim() normal variates in index order for the Gaussian
  /// kind and nothing for None.
  void sample(const QuadraticProblem& problem, std::mt19937_64& rng,
              std::vector<double>& out) const;
};

struct CounterexampleInstance {
  QuadraticProblem problem;
  std::vector<double> w0;
  double initial_gap;  // f(w0) - f(w*) = c0^2/2 (L + mu (d-1))
};

/// Worst-case SGD instance: spectrum (L, mu, ..., mu) with mu = L/kappa,
/// dimension d = ceil(kappa) + 1, zero optimum, zero noise, and every
/// coordinate of w0 equal to c0. Requires kappa >= 4.
CounterexampleInstance counterexample_instance(double kappa, double L,
                                               double c0);

struct RidgeQuadratic {
  QuadraticProblem problem;        // spectrum of H desc., w_star rotated, sigma2 = 0
  Eigen::MatrixXd basis;           // columns U_j: H = U diag(lambda) U'
  Eigen::VectorXd w_star_original; // optimum in the original coordinates
  double optimum_value;            // f(w_star)
};

/// Builds f(w) = (1/n)|Xw - Y|^2 + alpha |w|^2 as a quadratic in the
/// 1/2 w'Hw - b'w convention (H = (2/n)X'X + 2 alpha I, b = (2/n)X'Y),
/// eigendecomposes H and rotates the closed-form optimum
/// w* = (X'X + n alpha I)^{-1} X'Y into the eigenbasis.
/// alpha = 0 with rank-deficient X'X is rejected as singular.
RidgeQuadratic ridge_to_quadratic(const Eigen::MatrixXd& X,
                                  const Eigen::VectorXd& Y, double alpha);

/// Constants of the least-squares noise transformation.
struct LeastSquaresParams {
  double alpha = 0.0;         // compact-set radius
  double kappa_tilde = 1.0;   // statistical condition number, >= 1
  double sigma_tilde2 = 0.0;

  LeastSquaresParams() = default;
  LeastSquaresParams(double a, double kt, double st2);
};

/// Effective noise scale 2 (alpha^2 (kappa_tilde - 1) + sigma_tilde2).
double effective_sigma2(const LeastSquaresParams& p);

}  // namespace shb

#endif  // SHB_PROBLEM_HPP
