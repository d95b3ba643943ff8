#include "shb/problem.hpp"

#include <cmath>
#include <stdexcept>

#include "shb/numeric.hpp"

namespace shb {

QuadraticProblem::QuadraticProblem(std::vector<double> eigenvalues,
                                   double sigma2, std::vector<double> w_star)
    : eigenvalues_(std::move(eigenvalues)),
      sigma2_(sigma2),
      w_star_(std::move(w_star)) {
  if (eigenvalues_.empty())
    throw std::invalid_argument("QuadraticProblem: empty spectrum");
  for (std::size_t j = 0; j < eigenvalues_.size(); ++j) {
    if (!(eigenvalues_[j] > 0.0) || !std::isfinite(eigenvalues_[j]))
      throw std::invalid_argument(
          "QuadraticProblem: eigenvalues must be strictly positive");
    if (j > 0 && eigenvalues_[j] > eigenvalues_[j - 1])
      throw std::invalid_argument(
          "QuadraticProblem: eigenvalues must be nonincreasing");
  }
  if (!(sigma2_ >= 0.0))
    throw std::invalid_argument("QuadraticProblem: sigma2 must be >= 0");
  if (w_star_.empty()) {
    w_star_.assign(eigenvalues_.size(), 0.0);
  } else if (w_star_.size() != eigenvalues_.size()) {
    throw std::invalid_argument(
        "QuadraticProblem: w_star dimension mismatch");
  }
}

double excess_risk(const QuadraticProblem& problem,
                   std::span<const double> w) {
  if (w.size() != problem.dim())
    throw std::invalid_argument("excess_risk: dimension mismatch");
  const auto& lambda = problem.eigenvalues();
  const auto& ws = problem.w_star();
  std::vector<double> terms(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double dev = w[j] - ws[j];
    terms[j] = lambda[j] * dev * dev;
  }
  return 0.5 * pairwise_sum(terms);
}

NoiseModel::NoiseModel(NoiseKind k, int m) : kind(k), batch_size(m) {
  if (batch_size < 1)
    throw std::invalid_argument("NoiseModel: batch size must be >= 1");
}

void NoiseModel::sample(const QuadraticProblem& problem, std::mt19937_64& rng,
                        std::vector<double>& out) const {
  out.assign(problem.dim(), 0.0);
  if (kind == NoiseKind::None) return;
  const double s2_eff = problem.sigma2() / static_cast<double>(batch_size);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t j = 0; j < problem.dim(); ++j) {
    out[j] = std::sqrt(s2_eff * problem.eigenvalues()[j]) * normal(rng);
  }
}

CounterexampleInstance counterexample_instance(double kappa, double L,
                                               double c0) {
  if (!(kappa >= 4.0))
    throw std::invalid_argument("counterexample_instance: kappa must be >= 4");
  if (!(L > 0.0))
    throw std::invalid_argument("counterexample_instance: L must be > 0");
  const double mu = L / kappa;
  const auto d = static_cast<std::size_t>(std::ceil(kappa)) + 1;
  std::vector<double> spectrum(d, mu);
  spectrum[0] = L;
  QuadraticProblem problem(std::move(spectrum), /*sigma2=*/0.0);
  std::vector<double> w0(d, c0);
  const double gap =
      0.5 * c0 * c0 * (L + mu * static_cast<double>(d - 1));
  return {std::move(problem), std::move(w0), gap};
}

RidgeQuadratic ridge_to_quadratic(const Eigen::MatrixXd& X,
                                  const Eigen::VectorXd& Y, double alpha) {
  const auto n = X.rows();
  const auto p = X.cols();
  if (n < 1 || p < 1)
    throw std::invalid_argument("ridge_to_quadratic: empty design matrix");
  if (Y.size() != n)
    throw std::invalid_argument("ridge_to_quadratic: label size mismatch");
  if (!(alpha >= 0.0))
    throw std::invalid_argument("ridge_to_quadratic: alpha must be >= 0");

  const double n_d = static_cast<double>(n);
  const Eigen::MatrixXd gram = X.transpose() * X;
  Eigen::MatrixXd hessian = (2.0 / n_d) * gram;
  hessian.diagonal().array() += 2.0 * alpha;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hessian);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("ridge_to_quadratic: eigendecomposition failed");

  // Ascending from Eigen; the problem wants the spectrum nonincreasing.
  const Eigen::VectorXd asc = eig.eigenvalues();
  const double lambda_max = asc(p - 1);
  if (!(asc(0) > 1e-12 * std::max(1.0, lambda_max)))
    throw std::invalid_argument(
        "ridge_to_quadratic: singular Hessian (alpha = 0 with rank-deficient "
        "X'X)");

  Eigen::MatrixXd basis(p, p);
  std::vector<double> spectrum(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) {
    spectrum[static_cast<std::size_t>(j)] = asc(p - 1 - j);
    basis.col(j) = eig.eigenvectors().col(p - 1 - j);
  }

  Eigen::MatrixXd reg = gram;
  reg.diagonal().array() += n_d * alpha;
  const Eigen::VectorXd w_star = reg.ldlt().solve(X.transpose() * Y);
  const double optimum =
      (X * w_star - Y).squaredNorm() / n_d + alpha * w_star.squaredNorm();

  const Eigen::VectorXd w_star_eigen = basis.transpose() * w_star;
  std::vector<double> w_star_coords(w_star_eigen.data(),
                                    w_star_eigen.data() + p);
  QuadraticProblem problem(std::move(spectrum), /*sigma2=*/0.0,
                           std::move(w_star_coords));
  return {std::move(problem), std::move(basis), w_star, optimum};
}

LeastSquaresParams::LeastSquaresParams(double a, double kt, double st2)
    : alpha(a), kappa_tilde(kt), sigma_tilde2(st2) {
  if (!(alpha >= 0.0) || !(sigma_tilde2 >= 0.0))
    throw std::invalid_argument("LeastSquaresParams: negative field");
  if (!(kappa_tilde >= 1.0))
    throw std::invalid_argument("LeastSquaresParams: kappa_tilde must be >= 1");
}

double effective_sigma2(const LeastSquaresParams& p) {
  return 2.0 * (p.alpha * p.alpha * (p.kappa_tilde - 1.0) + p.sigma_tilde2);
}

}  // namespace shb
