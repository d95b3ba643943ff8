#include "shb/transfer.hpp"

#include <cmath>
#include <stdexcept>

namespace shb {

Mat2 transfer_rows(double eta, double lambda, double beta) {
  return {1.0 + beta - eta * lambda, -beta, 1.0, 0.0};
}

TransferMatrix::TransferMatrix(double eta, double lambda, double beta)
    : eta_(eta), lambda_(lambda), beta_(beta) {
  if (!(eta >= 0.0) || !std::isfinite(eta))
    throw std::invalid_argument("TransferMatrix: eta must be >= 0");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("TransferMatrix: lambda must be > 0");
  if (!(beta >= 0.0 && beta < 1.0))
    throw std::invalid_argument("TransferMatrix: beta must be in [0,1)");
  if (!(eta * lambda < 1.0 + beta))
    throw std::invalid_argument(
        "TransferMatrix: eta*lambda must be < 1 + beta (positive trace)");
  m_ = transfer_rows(eta, lambda, beta);
}

TransferMatrix transfer_matrix(double eta, double lambda, double beta) {
  return TransferMatrix(eta, lambda, beta);
}

double discriminant(double eta_lambda, double beta) {
  const double trace = 1.0 + beta - eta_lambda;
  return trace * trace - 4.0 * beta;
}

double discriminant(const TransferMatrix& T) {
  return discriminant(T.eta() * T.lambda(), T.beta());
}

double spectral_radius(double eta_lambda, double beta) {
  const double disc = discriminant(eta_lambda, beta);
  if (disc >= 0.0) {
    return 0.5 * (1.0 + beta - eta_lambda + std::sqrt(disc));
  }
  return std::sqrt(beta);
}

double spectral_radius(const TransferMatrix& T) {
  return spectral_radius(T.eta() * T.lambda(), T.beta());
}

double rho_upper_bound(const TransferMatrix& T) {
  if (discriminant(T) < 0.0)
    throw std::invalid_argument(
        "rho_upper_bound: stated for the real-eigenvalue regime only");
  const double el = T.eta() * T.lambda();
  return 1.0 - 0.5 * el - el / (4.0 * (1.0 - std::sqrt(T.beta())));
}

Mat2 product(std::span<const TransferMatrix> matrices) {
  if (matrices.empty())
    throw std::invalid_argument("product: empty matrix list");
  Mat2 p = matrices[0].matrix();
  for (std::size_t i = 1; i < matrices.size(); ++i)
    p = p * matrices[i].matrix();
  return p;
}

double product_op_norm(std::span<const TransferMatrix> matrices) {
  return product(matrices).op_norm();
}

double product_frobenius_norm(std::span<const TransferMatrix> matrices) {
  return product(matrices).frobenius_norm();
}

Mat2 matrix_power(const Mat2& a, std::size_t k) {
  if (k == 0) return Mat2::identity();
  Mat2 p = a;
  for (std::size_t i = 1; i < k; ++i) p = p * a;
  return p;
}

ScaledMat2 matrix_power_scaled(const Mat2& a, std::size_t k) {
  ScaledMat2 result{Mat2::identity(), 0.0};
  for (std::size_t i = 0; i < k; ++i) {
    result.m = result.m * a;
    const double scale = result.m.max_abs();
    if (scale > 0.0 && std::isfinite(scale)) {
      result.m = result.m.scaled(1.0 / scale);
      result.log_scale += std::log(scale);
    }
  }
  return result;
}

}  // namespace shb
