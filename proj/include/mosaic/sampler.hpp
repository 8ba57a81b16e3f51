#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mosaic/marginals.hpp"
#include "mosaic/types.hpp"

namespace mosaic {

// Knot prior ~ sigma_jj^{-1/2} on {|mu_j| < A, 0 < sigma_jj < B};
// tile prior is flat on {|sigma_st| < sqrt(sigma_ss sigma_tt)}.
struct PriorConfig {
  double A = 100.0;
  double B = 10.0;
};

enum class TileStrategy { ShortMH, Laplace, PlugIn };

std::string to_string(TileStrategy strategy);
TileStrategy tile_strategy_from_string(const std::string& name);

struct ChainConfig {
  int iterations = 200;
  int burn_in = 100;
  int thin = 1;
  double proposal_scale = 0.0;  // <= 0: derive from curvature at the init
  TileStrategy tile_strategy = TileStrategy::Laplace;
  int tile_inner_steps = 5;       // ShortMH
  int tile_iterations = 10000;    // PlugIn chain length
  int tile_burn_in = 5000;        // PlugIn burn-in
  int knot_quad_order = kDefaultKnotQuadOrder;
  int tile_quad_order = kDefaultTileQuadOrder;
  std::uint64_t seed = 1;

  int retained() const { return (iterations - burn_in) / thin; }
  void validate() const;
};

// Aligned joint draws from the mosaic: tile draw m was generated
// conditional on knot draw m of its two dimensions (PlugIn draws instead
// condition on the knot posterior means).
struct MosaicSamples {
  int p = 0;
  int M = 0;
  std::vector<KnotParam> knots;  // M x p, row-major
  std::vector<TileParam> tiles;  // M x p(p-1)/2, row-major
  std::vector<Eigen::MatrixXd> corrected_sigma;  // empty until corrected
  std::vector<double> knot_acceptance;           // per knot chain
  std::vector<double> tile_acceptance;           // per tile task
  std::vector<int> laplace_fallbacks;            // per tile task
  std::vector<int> zero_acceptance_chains;       // knot chain ids, diagnostic
  double knot_seconds = 0.0;
  double tile_seconds = 0.0;

  const KnotParam& knot(int m, int j) const { return knots[m * p + j]; }
  const TileParam& tile(int m, int k) const {
    return tiles[m * pair_count(p) + k];
  }
  Eigen::MatrixXd sigma_draw(int m) const;
  Parameters draw(int m) const;
};

struct KnotChainResult {
  std::vector<KnotParam> draws;
  double acceptance = 0.0;
  bool zero_acceptance = false;
};

// Random-walk MH on (mu_j, log sigma_jj) with the log-scale Jacobian folded
// into the target; proposal scales adapt toward 0.35 acceptance during
// burn-in and stay fixed afterwards.
KnotChainResult sample_knot(LinkFamily link, const Hist1& hist,
                            const PriorConfig& prior, const ChainConfig& cfg,
                            int chain_id);

// One aligned tile draw: tile_inner_steps of random-walk MH on sigma_st
// given the m-th knot draws, warm-started at the previous retained value
// (sigma_st = 0 for m = 0).
TileParam sample_tile_short_mh(LinkFamily link_s, LinkFamily link_t, int s,
                               int t, const KnotParam& knot_s,
                               const KnotParam& knot_t, const Hist2& hist,
                               const PriorConfig& prior,
                               const ChainConfig& cfg, int chain_id, int m,
                               double warm_start, const QuadratureRule& rule,
                               double* acceptance = nullptr);

// Golden-section mode search, finite-difference curvature, one Gaussian
// draw rejected-and-redrawn into the support. Non-concave curvature or
// support exhaustion falls back to ShortMH for this draw (counted).
TileParam sample_tile_laplace(LinkFamily link_s, LinkFamily link_t, int s,
                              int t, const KnotParam& knot_s,
                              const KnotParam& knot_t, const Hist2& hist,
                              const PriorConfig& prior, const ChainConfig& cfg,
                              int chain_id, int m, double warm_start,
                              const QuadratureRule& rule, int* fallbacks,
                              double* acceptance = nullptr);

// One long adapted chain targeting the plug-in conditional
// tau(. | knot posterior means); returns M thinned draws.
std::vector<TileParam> sample_tile_plugin(LinkFamily link_s, LinkFamily link_t,
                                          int s, int t,
                                          const KnotParam& mean_s,
                                          const KnotParam& mean_t,
                                          const Hist2& hist,
                                          const PriorConfig& prior,
                                          const ChainConfig& cfg, int chain_id,
                                          int M, const QuadratureRule& rule,
                                          double* acceptance = nullptr);

// Algorithm: step 1 samples the p knot marginals in parallel, step 2 the
// p(p-1)/2 tile conditionals in parallel with the configured strategy.
// A fixed seed gives identical output for every worker count.
MosaicSamples run_mosaic(const ModelSpec& spec, const CompressedDataset& data,
                         const PriorConfig& prior, const ChainConfig& cfg,
                         int workers = 1);

struct PosteriorMean {
  Parameters params;
  std::optional<Eigen::MatrixXd> corrected_sigma;
};

PosteriorMean posterior_mean(const MosaicSamples& samples);

// Fills corrected_sigma with the PSD projection of every assembled draw.
// eps < 0 selects the default floor 1e-8 * max diagonal per draw; eps = 0 is
// the exact projection onto the closed cone. Returns the fraction of draws
// that were already inside.
double correct_samples(MosaicSamples& samples, double eps = -1.0,
                       int workers = 1);

}  // namespace mosaic
