#pragma once

#include <cstdint>
#include <utility>

#include "mosaic/rng.hpp"
#include "mosaic/types.hpp"

namespace mosaic {

struct TruthSpec {
  std::pair<double, double> mu_range{-4.0, -3.0};
  std::pair<double, double> sigma_diag_range{0.5, 1.0};
  double lkj_eta = 1.0;  // 1 = uniform over correlation matrices
  int p = 3;
  std::int64_t n = 10000;
  LinkFamily link = LinkFamily::PoissonLogNormal;
  std::uint64_t seed = 1;

  void validate() const;
};

// Unit-diagonal PD correlation matrix ~ LKJ(eta), onion construction.
Eigen::MatrixXd sample_lkj(int p, double eta, Rng& rng);

// Latent Gaussian rows for fixed parameters, via Cholesky.
Eigen::MatrixXd sample_latents(const Parameters& params, std::int64_t n,
                               Rng& rng);

// Counts through the link for fixed latents.
IntMatrix observe(const Eigen::MatrixXd& latents, LinkFamily link, Rng& rng);

struct SimulatedData {
  IntMatrix y;
  Parameters truth;
  Eigen::MatrixXd latents;  // kept as a test hook
};

// Draws (mu, Sigma) from the truth ranges (uniform means and diagonal
// scales composed with an LKJ correlation), then the latents, then the
// observed counts.
SimulatedData simulate_dataset(const TruthSpec& truth, Rng& rng);

}  // namespace mosaic
