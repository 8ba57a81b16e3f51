#pragma once

#include <cstdint>
#include <vector>

#include "mosaic/mh.hpp"
#include "mosaic/rng.hpp"
#include "mosaic/types.hpp"

namespace mosaic {

struct DamcmcConfig {
  int iterations = 2000;
  int burn_in = -1;        // < 0: half of the recorded sweeps
  int thin_target = 500;   // draws kept after thinning
  double budget_seconds = 0.0;  // > 0: wall-clock budget instead of iterations
  double latent_step_factor = 0.5;  // of the conditional sd, fixed
  std::uint64_t seed = 1;
};

struct AugmentedState {
  Eigen::MatrixXd latents;  // n x p
  Parameters params;        // sigma PD at every iteration
  long long iteration = 0;
};

struct DamcmcResult {
  std::vector<Parameters> draws;  // thinned, post burn-in
  double latent_acceptance = 0.0;
  long long sweeps = 0;
  double latent_seconds = 0.0;
  double param_seconds = 0.0;
};

double link_log_pdf(LinkFamily link, std::int64_t y, double x);

// In-place latent update for the model's links; wraps latent_sweep.
double update_latents(AugmentedState& state, const IntMatrix& raw,
                      const ModelSpec& spec, std::uint64_t master_seed,
                      double step_factor, int workers);

// Conjugate draw under the Jeffreys prior |Sigma|^{-(p+1)/2}:
// Sigma | x ~ InvWishart(n-1, S) with S the centered scatter of x, then
// mu | Sigma, x ~ Normal(xbar, Sigma/n). Requires n > p.
void update_params(AugmentedState& state, Rng& rng);

DamcmcResult run_damcmc(const ModelSpec& spec, const IntMatrix& raw,
                        const DamcmcConfig& cfg,
                        const Parameters* init_params = nullptr,
                        int workers = 1);

}  // namespace mosaic

#include "mosaic/damcmc_sweep.hpp"
