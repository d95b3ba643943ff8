#ifndef SHB_TRANSFER_HPP
#define SHB_TRANSFER_HPP

#include <cstddef>
#include <span>

#include "shb/mat2.hpp"

namespace shb {

/// One-step propagator of a single eigencomponent of the (current, previous)
/// deviation pair under heavy-ball momentum:
///
///     ((1 + beta - eta*lambda, -beta),
///      (1,                     0))
///
/// Trace and determinant are 1 + beta - eta*lambda and beta, so the
/// eigenvalue pair solves g^2 - (1 + beta - eta*lambda) g + beta = 0.
/// Construction requires eta*lambda < 1 + beta (positive trace), the regime
/// the spectral formulas below are stated for.
class TransferMatrix {
 public:
  TransferMatrix(double eta, double lambda, double beta);

  double eta() const { return eta_; }
  double lambda() const { return lambda_; }
  double beta() const { return beta_; }
  const Mat2& matrix() const { return m_; }
  double trace() const { return m_.trace(); }
  double det() const { return beta_; }

 private:
  double eta_, lambda_, beta_;
  Mat2 m_;
};

/// Factory with full validation; same contract as the constructor.
TransferMatrix transfer_matrix(double eta, double lambda, double beta);

/// The raw 2x2 rows for arbitrary (eta, lambda, beta), without the
/// constructor's regime checks. The exact-risk recursion uses this since the
/// dynamics are well defined (if divergent) for any step size.
Mat2 transfer_rows(double eta, double lambda, double beta);

/// (1 + beta - eta*lambda)^2 - 4 beta. Nonnegative means real eigenvalues;
/// the sign boundary is eta*lambda = (1 - sqrt(beta))^2.
double discriminant(const TransferMatrix& T);
double discriminant(double eta_lambda, double beta);

/// Largest eigenvalue modulus: (trace + sqrt(disc))/2 in the real regime,
/// sqrt(beta) in the complex regime. The zero-discriminant boundary takes the
/// real branch; both formulas agree there.
double spectral_radius(const TransferMatrix& T);
double spectral_radius(double eta_lambda, double beta);

/// Real-regime bound rho <= 1 - eta*lambda/2 - eta*lambda/(4(1-sqrt(beta))).
/// Rejected in the complex regime where the bound is not stated.
double rho_upper_bound(const TransferMatrix& T);

/// Left-to-right product of the list; rejected when empty (callers pass an
/// explicit identity if that is what they mean).
Mat2 product(std::span<const TransferMatrix> matrices);

/// Operator 2-norm (largest singular value) of the left-to-right product.
double product_op_norm(std::span<const TransferMatrix> matrices);

/// Frobenius-norm companion; the power-norm and product bounds are natively
/// stated in this norm, the operator norm follows via |A|_2 <= |A|_F.
double product_frobenius_norm(std::span<const TransferMatrix> matrices);

/// A^k by k-1 successive right-multiplications, bit-identical to product()
/// applied to k copies of A.
Mat2 matrix_power(const Mat2& a, std::size_t k);

/// Matrix with a separately tracked log scale: value = m * exp(log_scale).
/// Keeps long powers of near-unit-radius matrices away from overflow and
/// underflow.
struct ScaledMat2 {
  Mat2 m;
  double log_scale = 0.0;

  double log_frobenius_norm() const {
    return std::log(m.frobenius_norm()) + log_scale;
  }
  double log_op_norm() const { return std::log(m.op_norm()) + log_scale; }
};

/// A^k by repeated multiplication with per-step renormalization.
ScaledMat2 matrix_power_scaled(const Mat2& a, std::size_t k);

}  // namespace shb

#endif  // SHB_TRANSFER_HPP
