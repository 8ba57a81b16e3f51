#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "mosaic/normal.hpp"
#include "oracles.hpp"

using namespace mosaic;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("normal cells against erfc forms") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cell(-kInf, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cell(-kInf, kInf) == 1.0);
  // frozen: Phi(1) - Phi(0) = 0.34134474606854295
  CHECK(normal_cell(0.0, 1.0) ==
        doctest::Approx(0.34134474606854295).epsilon(1e-14));
  // far upper cell keeps relative accuracy through the survival branch
  const double far = normal_cell(8.0, 9.0);
  const double expected = 0.5 * (std::erfc(8.0 * M_SQRT1_2) -
                                 std::erfc(9.0 * M_SQRT1_2));
  CHECK(far == doctest::Approx(expected).epsilon(1e-13));
  CHECK(far > 0.0);
}

TEST_CASE("orthant identity: quadrant mass is 1/4 + asin(rho)/(2 pi)") {
  const Eigen::Vector2d lower(-kInf, -kInf);
  const Eigen::Vector2d upper(0.0, 0.0);
  const Eigen::Vector2d mean(0.0, 0.0);
  for (double rho : {-0.9, -0.5, -0.1, 0.0, 0.3, 0.5, 0.8, 0.95, 0.99}) {
    CAPTURE(rho);
    Eigen::Matrix2d cov;
    cov << 1.0, rho, rho, 1.0;
    const double expected = 0.25 + std::asin(rho) / (2.0 * M_PI);
    CHECK(std::abs(bvn_rect(lower, upper, mean, cov) - expected) < 1e-12);
  }
  // rho = 0.5 -> exactly 1/3
  Eigen::Matrix2d cov;
  cov << 1.0, 0.5, 0.5, 1.0;
  CHECK(std::abs(bvn_rect(lower, upper, mean, cov) - 1.0 / 3.0) < 1e-13);
}

TEST_CASE("independence and total mass") {
  const Eigen::Vector2d mean(0.0, 0.0);
  Eigen::Matrix2d eye;
  eye << 1.0, 0.0, 0.0, 1.0;
  CHECK(std::abs(bvn_rect({-kInf, -kInf}, {0.0, 0.0}, mean, eye) - 0.25) <
        1e-14);
  CHECK(bvn_rect({-kInf, -kInf}, {kInf, kInf}, mean, eye) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("rectangles match the Gauss-Legendre oracle") {
  // spot grid over offsets and correlations, absolute error <= 1e-10
  const double rhos[] = {-0.97, -0.8, -0.45, -0.2, 0.0, 0.15,
                         0.4,   0.7,  0.9,   0.96, 0.99};
  const double edges[] = {-3.0, -1.2, -0.4, 0.0, 0.7, 1.5, 2.5};
  for (double rho : rhos) {
    Eigen::Matrix2d cov;
    cov << 1.0, rho, rho, 1.0;
    for (double a1 : edges) {
      for (double a2 : edges) {
        const double b1 = a1 + 1.0, b2 = a2 + 1.3;
        const double got = bvn_rect({a1, a2}, {b1, b2},
                                    Eigen::Vector2d(0.0, 0.0), cov);
        const double expected = oracles::bvn_rect_gl(a1, b1, a2, b2, rho);
        CAPTURE(rho);
        CAPTURE(a1);
        CAPTURE(a2);
        CHECK(std::abs(got - expected) < 1e-10);
      }
    }
  }
}

TEST_CASE("general mean and covariance standardize correctly") {
  Eigen::Matrix2d cov;
  cov << 2.0, 0.6, 0.6, 0.5;
  const Eigen::Vector2d mean(1.0, -2.0);
  const double rho = 0.6 / std::sqrt(2.0 * 0.5);
  const double got =
      bvn_rect({0.0, -2.5}, {2.0, -1.5}, mean, cov);
  const double expected = oracles::bvn_rect_gl(
      (0.0 - 1.0) / std::sqrt(2.0), (2.0 - 1.0) / std::sqrt(2.0),
      (-2.5 + 2.0) / std::sqrt(0.5), (-1.5 + 2.0) / std::sqrt(0.5), rho);
  CHECK(std::abs(got - expected) < 1e-10);
}

TEST_CASE("degenerate correlation is rejected") {
  Eigen::Matrix2d cov;
  cov << 1.0, 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(bvn_rect({-1.0, -1.0}, {1.0, 1.0},
                           Eigen::Vector2d(0.0, 0.0), cov),
                  std::invalid_argument);
}
