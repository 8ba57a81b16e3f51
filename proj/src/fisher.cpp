#include "mosaic/fisher.hpp"

#include <cmath>
#include <stdexcept>

#include "mosaic/marginals.hpp"
#include "mosaic/simulate.hpp"

namespace mosaic {

namespace {

constexpr double kFdStep = 1e-4;

// Average per-observation knot log likelihood as a function of theta_jj.
struct KnotObjective {
  LinkFamily link;
  const Hist1& hist;
  const QuadratureRule& rule;
  double inv_n;

  double operator()(double mu, double var) const {
    return inv_n * knot_loglik(link, {mu, var}, hist, rule);
  }
};

// Average per-observation tile log likelihood as a function of the full
// parameter vector; dependence on knots other than s and t is evaluated,
// not assumed away, so the sparsity of the cross blocks is observable.
struct TileObjective {
  LinkFamily link_s, link_t;
  int s, t;
  const Hist2& hist;
  const QuadratureRule& rule;
  double inv_n;

  double operator()(double cov, const KnotParam& ks,
                    const KnotParam& kt) const {
    return inv_n *
           tile_loglik(link_s, link_t, {s, t, cov}, ks, kt, hist, rule);
  }
};

}  // namespace

FisherDiagnostic fisher_diagnostic(const ModelSpec& spec,
                                   const Parameters& truth,
                                   std::int64_t mc_draws, std::int64_t n,
                                   Rng& rng) {
  spec.validate();
  if (truth.p() != spec.p)
    throw std::invalid_argument("fisher_diagnostic: truth dimension mismatch");
  if (mc_draws < 2)
    throw std::invalid_argument("fisher_diagnostic: mc_draws too small");

  const int p = spec.p;
  const int npairs = pair_count(p);
  const Eigen::MatrixXd latents = sample_latents(truth, mc_draws, rng);
  const IntMatrix y = [&] {
    IntMatrix out(mc_draws, p);
    for (int j = 0; j < p; ++j) {
      // per-column links may differ
      Eigen::MatrixXd col = latents.col(j);
      IntMatrix obs = observe(col, spec.links[j], rng);
      out.col(j) = obs.col(0);
    }
    return out;
  }();
  const CompressedDataset data = compress(y);

  const QuadratureRule knot_rule = gauss_hermite_rule(kDefaultKnotQuadOrder);
  const QuadratureRule tile_rule = gauss_hermite_rule(kDefaultTileQuadOrder);
  const double inv_n = 1.0 / static_cast<double>(mc_draws);

  FisherDiagnostic diag;
  diag.mc_draws = mc_draws;
  diag.n = n;
  diag.knot_blocks.resize(p);
  diag.tile_blocks.resize(npairs);
  diag.cross = Eigen::MatrixXd::Zero(npairs, 2 * p);
  diag.predicted_knot_sd.resize(2 * p);

  const double h = kFdStep;
  for (int j = 0; j < p; ++j) {
    const KnotObjective f{spec.links[j], data.uni[j], knot_rule, inv_n};
    const double mu = truth.mu(j);
    const double var = truth.sigma(j, j);
    const double f0 = f(mu, var);
    Eigen::Matrix2d hess;
    hess(0, 0) = (f(mu + h, var) - 2.0 * f0 + f(mu - h, var)) / (h * h);
    hess(1, 1) = (f(mu, var + h) - 2.0 * f0 + f(mu, var - h)) / (h * h);
    hess(0, 1) = (f(mu + h, var + h) - f(mu + h, var - h) -
                  f(mu - h, var + h) + f(mu - h, var - h)) /
                 (4.0 * h * h);
    hess(1, 0) = hess(0, 1);
    diag.knot_blocks[j] = -hess;
    const Eigen::Matrix2d block = diag.knot_blocks[j];
    const double det = block.determinant();
    if (!(block(0, 0) > 0.0) || !(det > 0.0)) {
      diag.non_pd_blocks.push_back(j);
      diag.predicted_knot_sd(2 * j) = std::nan("");
      diag.predicted_knot_sd(2 * j + 1) = std::nan("");
      continue;
    }
    const Eigen::Matrix2d inv = block.inverse();
    diag.predicted_knot_sd(2 * j) =
        std::sqrt(inv(0, 0) / static_cast<double>(n));
    diag.predicted_knot_sd(2 * j + 1) =
        std::sqrt(inv(1, 1) / static_cast<double>(n));
  }

  for (int k = 0; k < npairs; ++k) {
    const auto [s, t] = pair_from_index(k, p);
    const TileObjective f{spec.links[s], spec.links[t], s,
                          t,             data.biv[k],   tile_rule,
                          inv_n};
    const KnotParam ks{truth.mu(s), truth.sigma(s, s)};
    const KnotParam kt{truth.mu(t), truth.sigma(t, t)};
    const double cov = truth.sigma(s, t);
    const double f0 = f(cov, ks, kt);
    diag.tile_blocks(k) =
        -(f(cov + h, ks, kt) - 2.0 * f0 + f(cov - h, ks, kt)) / (h * h);

    // cross derivatives against every knot coordinate
    for (int j = 0; j < p; ++j) {
      for (int coord = 0; coord < 2; ++coord) {
        const auto shifted = [&](double delta) {
          KnotParam a = ks, b = kt;
          if (j == s) (coord == 0 ? a.mu : a.var) += delta;
          if (j == t) (coord == 0 ? b.mu : b.var) += delta;
          // j outside {s,t}: the marginal does not involve theta_jj and the
          // difference quotient evaluates to exactly zero.
          return std::pair<KnotParam, KnotParam>{a, b};
        };
        const auto [ap, bp] = shifted(h);
        const auto [am, bm] = shifted(-h);
        const double mixed =
            (f(cov + h, ap, bp) - f(cov + h, am, bm) - f(cov - h, ap, bp) +
             f(cov - h, am, bm)) /
            (4.0 * h * h);
        diag.cross(k, 2 * j + coord) = -mixed;
      }
    }
  }
  return diag;
}

}  // namespace mosaic
