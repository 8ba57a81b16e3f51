#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mosaic/fisher.hpp"
#include "mosaic/marginals.hpp"
#include "mosaic/simulate.hpp"
#include "oracles.hpp"

using namespace mosaic;

namespace {

Parameters fixed_truth_3d() {
  Parameters t;
  t.mu = Eigen::Vector3d(-3.5, -3.2, -3.8);
  t.sigma.resize(3, 3);
  t.sigma << 0.8, 0.15, 0.10,
             0.15, 0.6, 0.12,
             0.10, 0.12, 0.7;
  return t;
}

}  // namespace

TEST_CASE("fisher blocks: PD knots, sparse cross matrix") {
  const Parameters truth = fixed_truth_3d();
  ModelSpec spec{3, std::vector<LinkFamily>(3, LinkFamily::PoissonLogNormal)};
  Rng rng(2);
  const FisherDiagnostic diag = fisher_diagnostic(spec, truth, 40000, 10000,
                                                  rng);

  CHECK(diag.non_pd_blocks.empty());
  for (int j = 0; j < 3; ++j) {
    const Eigen::Matrix2d block = diag.knot_blocks[j];
    CHECK(block(0, 0) > 0.0);
    CHECK(block.determinant() > 0.0);
    CHECK(block(0, 1) == block(1, 0));
  }
  for (int k = 0; k < 3; ++k) CHECK(diag.tile_blocks(k) > 0.0);

  // I12 rows for pair (s,t) vanish outside knot columns s and t
  for (int k = 0; k < 3; ++k) {
    const auto [s, t] = pair_from_index(k, 3);
    for (int j = 0; j < 3; ++j) {
      const double m0 = std::abs(diag.cross(k, 2 * j));
      const double m1 = std::abs(diag.cross(k, 2 * j + 1));
      if (j != s && j != t) {
        CHECK(m0 == 0.0);
        CHECK(m1 == 0.0);
      }
    }
    // the in-pair columns carry signal
    double mass = 0.0;
    mass += std::abs(diag.cross(k, 2 * s)) + std::abs(diag.cross(k, 2 * s + 1));
    mass += std::abs(diag.cross(k, 2 * t)) + std::abs(diag.cross(k, 2 * t + 1));
    CHECK(mass > 0.0);
  }

  for (int j = 0; j < 6; ++j) CHECK(diag.predicted_knot_sd(j) > 0.0);
}

TEST_CASE("score identity: the gradient has mean zero at the truth") {
  const double mu0 = -3.4, var0 = 0.75;
  Parameters truth;
  truth.mu = Eigen::VectorXd::Constant(1, mu0);
  truth.sigma = Eigen::MatrixXd::Constant(1, 1, var0);
  Rng rng(5);
  const Eigen::MatrixXd latents = sample_latents(truth, 60000, rng);
  const IntMatrix y = observe(latents, LinkFamily::PoissonLogNormal, rng);
  const CompressedDataset data = compress(y);
  const QuadratureRule rule = gauss_hermite_rule(kDefaultKnotQuadOrder);

  const double h = 1e-5;
  const auto grad = [&](std::int64_t value) {
    const auto cell = [&](double m, double v) {
      return knot_cell_loglik(LinkFamily::PoissonLogNormal, value, {m, v},
                              rule);
    };
    return Eigen::Vector2d(
        (cell(mu0 + h, var0) - cell(mu0 - h, var0)) / (2.0 * h),
        (cell(mu0, var0 + h) - cell(mu0, var0 - h)) / (2.0 * h));
  };

  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Vector2d sq = Eigen::Vector2d::Zero();
  const double n = static_cast<double>(data.n);
  for (const auto& [value, count] : data.uni[0]) {
    const Eigen::Vector2d g = grad(value);
    mean += static_cast<double>(count) * g;
    sq += static_cast<double>(count) * g.cwiseProduct(g);
  }
  mean /= n;
  for (int c = 0; c < 2; ++c) {
    const double sd = std::sqrt(sq(c) / n - mean(c) * mean(c));
    CHECK(std::abs(mean(c)) < 3.0 * sd / std::sqrt(n));
  }
}

TEST_CASE("second derivative routes agree at a fixed point") {
  // FD Hessian of the averaged log likelihood vs FD of the FD gradient
  Parameters truth;
  truth.mu = Eigen::VectorXd::Constant(1, -3.5);
  truth.sigma = Eigen::MatrixXd::Constant(1, 1, 0.7);
  Rng rng(7);
  const Eigen::MatrixXd latents = sample_latents(truth, 20000, rng);
  const IntMatrix y = observe(latents, LinkFamily::PoissonLogNormal, rng);
  const CompressedDataset data = compress(y);
  const QuadratureRule rule = gauss_hermite_rule(kDefaultKnotQuadOrder);
  const double inv_n = 1.0 / static_cast<double>(data.n);
  const auto f = [&](double m, double v) {
    return inv_n * knot_loglik(LinkFamily::PoissonLogNormal, {m, v},
                               data.uni[0], rule);
  };
  const double mu = -3.5, var = 0.7, h = 1e-4;
  const double direct =
      (f(mu + h, var) - 2.0 * f(mu, var) + f(mu - h, var)) / (h * h);
  const auto grad_mu = [&](double m) {
    return (f(m + h, var) - f(m - h, var)) / (2.0 * h);
  };
  const double nested = (grad_mu(mu + h) - grad_mu(mu - h)) / (2.0 * h);
  CHECK(direct == doctest::Approx(nested).epsilon(1e-4));
}

TEST_CASE("predicted knot sd scales as one over sqrt(n)") {
  Parameters truth;
  truth.mu = Eigen::Vector2d(4.5, 4.3);
  truth.sigma.resize(2, 2);
  truth.sigma << 1.2, 0.3, 0.3, 1.1;
  ModelSpec spec{2, std::vector<LinkFamily>(2, LinkFamily::RoundedGaussian)};
  Rng rng(11);
  const FisherDiagnostic at_1e4 =
      fisher_diagnostic(spec, truth, 30000, 10000, rng);
  Rng rng2(11);
  const FisherDiagnostic at_1e6 =
      fisher_diagnostic(spec, truth, 30000, 1000000, rng2);
  for (int c = 0; c < 4; ++c)
    CHECK(at_1e4.predicted_knot_sd(c) / at_1e6.predicted_knot_sd(c) ==
          doctest::Approx(10.0).epsilon(1e-9));
}
