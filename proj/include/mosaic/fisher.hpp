#pragma once

#include <cstdint>
#include <vector>

#include "mosaic/rng.hpp"
#include "mosaic/types.hpp"

namespace mosaic {

// Monte Carlo estimates of the per-observation information blocks at the
// truth: knot blocks Sigma_jj (negative expected Hessian of the univariate
// marginal log density in (mu_j, sigma_jj)), tile blocks Sigma_st (scalar,
// in sigma_st) and cross blocks Sigma_st,j. The cross matrix is sparse:
// rows for pair (s,t) are zero outside knot columns s and t.
struct FisherDiagnostic {
  std::vector<Eigen::Matrix2d> knot_blocks;  // I_tilde diagonal blocks
  Eigen::VectorXd tile_blocks;               // I11 diagonal (scalars)
  Eigen::MatrixXd cross;                     // I12: npairs x 2p
  Eigen::VectorXd predicted_knot_sd;  // sqrt(diag(I_tilde^{-1}) / n),
                                      // layout mu_1, s_11, mu_2, s_22, ...
  Eigen::VectorXd observed_knot_sd;   // same layout; filled by callers
  std::vector<int> non_pd_blocks;     // knot block indices that failed PD
  std::int64_t mc_draws = 0;
  std::int64_t n = 0;
};

// Hessians by central finite differences (step 1e-4 per coordinate) of the
// marginal log likelihoods averaged over mc_draws observations simulated at
// the truth.
FisherDiagnostic fisher_diagnostic(const ModelSpec& spec,
                                   const Parameters& truth,
                                   std::int64_t mc_draws, std::int64_t n,
                                   Rng& rng);

}  // namespace mosaic
