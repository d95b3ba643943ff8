#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "shb/rng.hpp"
#include "shb/transfer.hpp"

using namespace shb;

TEST_CASE("transfer matrix entries") {
  SUBCASE("zero step size") {
    const TransferMatrix t(0.0, 1.0, 0.5);
    CHECK(t.matrix().a00 == 1.5);
    CHECK(t.matrix().a01 == -0.5);
    CHECK(t.matrix().a10 == 1.0);
    CHECK(t.matrix().a11 == 0.0);
  }
  SUBCASE("momentum-free reduction") {
    const TransferMatrix t(0.3, 1.0, 0.0);
    CHECK(t.matrix().a00 == doctest::Approx(0.7));
    CHECK(t.matrix().a01 == 0.0);
  }
  SUBCASE("trace and determinant") {
    const TransferMatrix t(0.75, 1.0, 0.25);
    CHECK(t.trace() == doctest::Approx(0.5));
    CHECK(t.det() == doctest::Approx(0.25));
  }
  SUBCASE("out-of-range parameters rejected") {
    CHECK_THROWS_AS(TransferMatrix(-0.1, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(TransferMatrix(0.1, 0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(TransferMatrix(0.1, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(TransferMatrix(1.3, 1.0, 0.25), std::invalid_argument);
  }
}

TEST_CASE("discriminant") {
  SUBCASE("boundary is exactly zero") {
    const double beta = 0.36;
    const double boundary = (1.0 - std::sqrt(beta)) * (1.0 - std::sqrt(beta));
    CHECK(discriminant(boundary, beta) == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("complex example") {
    CHECK(discriminant(transfer_matrix(0.75, 1.0, 0.25)) ==
          doctest::Approx(-0.75));
  }
  SUBCASE("real example, cross-checked numerically") {
    const TransferMatrix t(0.2, 1.0, 0.25);
    CHECK(discriminant(t) == doctest::Approx(0.1025));
    const auto sum = shb::testing::eigensolver_sum(t.matrix());
    const auto prod = shb::testing::eigensolver_product(t.matrix());
    // Real eigenvalues g1, g2 with (g1-g2)^2 = disc.
    const double diff2 = sum.real() * sum.real() - 4.0 * prod.real();
    CHECK(diff2 == doctest::Approx(0.1025).epsilon(1e-10));
  }
}

TEST_CASE("spectral radius") {
  SUBCASE("complex branch returns exactly sqrt(beta)") {
    const TransferMatrix t(0.75, 1.0, 0.25);
    CHECK(spectral_radius(t) == std::sqrt(0.25));
    CHECK(spectral_radius(t) == doctest::Approx(0.5));
  }
  SUBCASE("momentum-free reduction") {
    CHECK(spectral_radius(transfer_matrix(0.3, 1.0, 0.0)) ==
          doctest::Approx(0.7));
  }
  SUBCASE("real branch against the numeric eigensolver") {
    const TransferMatrix t(0.01, 1.0, 0.25);
    CHECK(spectral_radius(t) == doctest::Approx(0.98661).epsilon(1e-4));
    CHECK(spectral_radius(t) ==
          doctest::Approx(shb::testing::eigensolver_spectral_radius(t.matrix()))
              .epsilon(1e-12));
  }
}

TEST_CASE("spectral radius matches the eigensolver across both branches") {
  std::mt19937_64 rng = make_stream(42, 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const double beta = 0.999 * unit(rng);
    const double eta_lambda = (1.0 + beta) * 0.999 * unit(rng);
    const Mat2 m = transfer_rows(eta_lambda, 1.0, beta);
    const double exact = spectral_radius(eta_lambda, beta);
    const double numeric = shb::testing::eigensolver_spectral_radius(m);
    CHECK(std::fabs(exact - numeric) <= 1e-10);
    if (discriminant(eta_lambda, beta) < 0.0)
      CHECK(exact == std::sqrt(beta));
  }
}

TEST_CASE("Vieta relations against the eigensolver") {
  std::mt19937_64 rng = make_stream(43, 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double beta = 0.999 * unit(rng);
    const double eta_lambda = (1.0 + beta) * 0.999 * unit(rng);
    const Mat2 m = transfer_rows(eta_lambda, 1.0, beta);
    const auto sum = shb::testing::eigensolver_sum(m);
    const auto prod = shb::testing::eigensolver_product(m);
    CHECK(std::abs(sum - std::complex<double>(1.0 + beta - eta_lambda)) <=
          1e-10);
    CHECK(std::abs(prod - std::complex<double>(beta)) <= 1e-10);
  }
}

TEST_CASE("spectral radius is nonincreasing in eta*lambda") {
  for (double beta : {0.0, 0.1, 0.25, 0.5, 0.9, 0.98}) {
    double prev = spectral_radius(1e-4, beta);
    for (int i = 1; i <= 400; ++i) {
      const double eta_lambda = 1e-4 + (1.0 - 1e-4) * i / 400.0;
      const double rho = spectral_radius(eta_lambda, beta);
      CHECK(rho <= prev + 1e-15);
      prev = rho;
    }
  }
}

TEST_CASE("real-regime upper bound on the spectral radius") {
  SUBCASE("reference points") {
    CHECK(rho_upper_bound(transfer_matrix(0.01, 1.0, 0.25)) ==
          doctest::Approx(0.99));
    CHECK(spectral_radius(transfer_matrix(0.01, 1.0, 0.25)) <= 0.99);
    CHECK(rho_upper_bound(transfer_matrix(0.5, 1.0, 0.0)) ==
          doctest::Approx(0.625));
    CHECK(spectral_radius(transfer_matrix(0.5, 1.0, 0.0)) ==
          doctest::Approx(0.5));
  }
  SUBCASE("bound goes to one as the step vanishes") {
    CHECK(rho_upper_bound(transfer_matrix(1e-12, 1.0, 0.25)) ==
          doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("complex regime rejected") {
    CHECK_THROWS_AS(rho_upper_bound(transfer_matrix(0.75, 1.0, 0.25)),
                    std::invalid_argument);
  }
  SUBCASE("holds across the real regime") {
    std::mt19937_64 rng = make_stream(44, 0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 5000; ++trial) {
      const double beta = 0.999 * unit(rng);
      const double limit = (1.0 - std::sqrt(beta)) * (1.0 - std::sqrt(beta));
      const double eta_lambda = limit * unit(rng);
      if (eta_lambda == 0.0) continue;
      const TransferMatrix t(eta_lambda, 1.0, beta);
      CHECK(spectral_radius(t) <= rho_upper_bound(t) + 1e-12);
    }
  }
}

TEST_CASE("products and powers") {
  SUBCASE("single degenerate matrix") {
    const TransferMatrix t(0.0, 1.0, 0.0);  // rows ((1,0),(1,0))
    const std::vector<TransferMatrix> one{t};
    CHECK(product_op_norm(one) == doctest::Approx(std::sqrt(2.0)));
  }
  SUBCASE("repeated product equals matrix_power bit for bit") {
    const TransferMatrix t(0.2, 1.0, 0.25);
    const std::vector<TransferMatrix> reps(7, t);
    const Mat2 via_product = product(reps);
    const Mat2 via_power = matrix_power(t.matrix(), 7);
    CHECK(via_product.a00 == via_power.a00);
    CHECK(via_product.a01 == via_power.a01);
    CHECK(via_product.a10 == via_power.a10);
    CHECK(via_product.a11 == via_power.a11);
  }
  SUBCASE("empty list rejected") {
    CHECK_THROWS_AS(product_op_norm(std::span<const TransferMatrix>{}),
                    std::invalid_argument);
  }
  SUBCASE("real-regime product obeys the combined norm bound") {
    std::mt19937_64 rng = make_stream(45, 0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
      const double beta = 0.25 + 0.7 * unit(rng);
      const double limit = (1.0 - std::sqrt(beta)) * (1.0 - std::sqrt(beta));
      double eta_lambda = limit * (0.1 + 0.9 * unit(rng));
      std::vector<TransferMatrix> mats;
      const int k = 1 + static_cast<int>(unit(rng) * 30);
      for (int i = 0; i < k; ++i) {
        mats.emplace_back(eta_lambda, 1.0, beta);
        if (unit(rng) < 0.2) eta_lambda *= 0.5;  // stage boundary
      }
      const double disc_last = discriminant(mats.back());
      const double rho_last = spectral_radius(mats.back());
      double factor = 8.0 * k;
      if (disc_last > 0.0)
        factor = std::min(factor, 8.0 / std::sqrt(disc_last));
      CHECK(product_op_norm(mats) <=
            factor * std::pow(rho_last, k) * (1.0 + 1e-9));
    }
  }
  SUBCASE("scaled power agrees with the direct power") {
    const Mat2 m = transfer_rows(0.3, 1.0, 0.5);
    const Mat2 direct = matrix_power(m, 40);
    const ScaledMat2 scaled = matrix_power_scaled(m, 40);
    CHECK(scaled.log_frobenius_norm() ==
          doctest::Approx(std::log(direct.frobenius_norm())).epsilon(1e-12));
    CHECK(scaled.log_op_norm() ==
          doctest::Approx(std::log(direct.op_norm())).epsilon(1e-12));
  }
  SUBCASE("powers match the closed form from the eigenvalue pair") {
    // With distinct real eigenvalues g1 > g2, T^k is
    //   ((g1^{k+1}-g2^{k+1})/(g1-g2), -b (g1^k-g2^k)/(g1-g2);
    //    (g1^k-g2^k)/(g1-g2),         -b (g1^{k-1}-g2^{k-1})/(g1-g2)).
    const double beta = 0.25, eta_lambda = 0.1;
    const double trace = 1.0 + beta - eta_lambda;
    const double root = std::sqrt(trace * trace - 4.0 * beta);
    const double g1 = 0.5 * (trace + root), g2 = 0.5 * (trace - root);
    auto ratio = [&](int k) {
      return (std::pow(g1, k) - std::pow(g2, k)) / (g1 - g2);
    };
    for (int k : {1, 2, 5, 17}) {
      const Mat2 power = matrix_power(transfer_rows(eta_lambda, 1.0, beta), k);
      CHECK(power.a00 == doctest::Approx(ratio(k + 1)).epsilon(1e-12));
      CHECK(power.a01 == doctest::Approx(-beta * ratio(k)).epsilon(1e-12));
      CHECK(power.a10 == doctest::Approx(ratio(k)).epsilon(1e-12));
      CHECK(power.a11 == doctest::Approx(-beta * ratio(k - 1)).epsilon(1e-12));
    }
  }
  SUBCASE("operator norm never exceeds the Frobenius norm") {
    std::mt19937_64 rng = make_stream(46, 0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
      const double beta = 0.99 * unit(rng);
      const double eta_lambda = (1.0 + beta) * 0.99 * unit(rng);
      std::vector<TransferMatrix> mats(1 + static_cast<std::size_t>(unit(rng) * 5),
                                       TransferMatrix(eta_lambda, 1.0, beta));
      CHECK(product_op_norm(mats) <=
            product_frobenius_norm(mats) * (1.0 + 1e-12));
    }
  }
}
