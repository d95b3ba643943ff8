#ifndef SHB_MAT2_HPP
#define SHB_MAT2_HPP

#include <algorithm>
#include <cmath>

namespace shb {

/// Dense 2x2 real matrix, row-major. The eigencomponent dynamics never need
/// anything larger, so this stays a plain value type with explicit formulas.
struct Mat2 {
  double a00 = 0.0, a01 = 0.0;
  double a10 = 0.0, a11 = 0.0;

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  constexpr Mat2 operator*(const Mat2& o) const {
    return {a00 * o.a00 + a01 * o.a10, a00 * o.a01 + a01 * o.a11,
            a10 * o.a00 + a11 * o.a10, a10 * o.a01 + a11 * o.a11};
  }

  constexpr Mat2 operator+(const Mat2& o) const {
    return {a00 + o.a00, a01 + o.a01, a10 + o.a10, a11 + o.a11};
  }

  constexpr Mat2 scaled(double s) const {
    return {s * a00, s * a01, s * a10, s * a11};
  }

  constexpr Mat2 transpose() const { return {a00, a10, a01, a11}; }

  constexpr double trace() const { return a00 + a11; }
  constexpr double det() const { return a00 * a11 - a01 * a10; }

  double frobenius_norm() const {
    return std::sqrt(a00 * a00 + a01 * a01 + a10 * a10 + a11 * a11);
  }

  /// Largest singular value, by the closed form for 2x2 matrices:
  /// sigma_max^2 = (|A|_F^2 + sqrt(|A|_F^4 - 4 det(A)^2)) / 2.
  double op_norm() const {
    const double f2 = a00 * a00 + a01 * a01 + a10 * a10 + a11 * a11;
    const double d = det();
    const double disc = std::max(0.0, f2 * f2 - 4.0 * d * d);
    return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
  }

  double max_abs() const {
    return std::max(std::max(std::fabs(a00), std::fabs(a01)),
                    std::max(std::fabs(a10), std::fabs(a11)));
  }
};

/// Smallest eigenvalue of the symmetric matrix ((s00, s01), (s01, s11)).
inline double sym2_min_eigenvalue(double s00, double s01, double s11) {
  const double mean = 0.5 * (s00 + s11);
  const double diff = 0.5 * (s00 - s11);
  return mean - std::sqrt(diff * diff + s01 * s01);
}

}  // namespace shb

#endif  // SHB_MAT2_HPP
