#include "mosaic/marginals.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mosaic/normal.hpp"

namespace mosaic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(sum exp(terms)) without underflow; -inf if all terms are -inf.
double log_sum_exp(const std::vector<double>& terms) {
  double m = -kInf;
  for (double t : terms) m = std::max(m, t);
  if (m == -kInf) return -kInf;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - m);
  return m + std::log(acc);
}

double rg_cell(std::int64_t y, double mu, double sd) {
  // y = 0 <=> x <= 0; y >= 1 <=> x in (y-1, y]
  if (y == 0) return normal_cdf((0.0 - mu) / sd);
  return normal_cell((static_cast<double>(y) - 1.0 - mu) / sd,
                     (static_cast<double>(y) - mu) / sd);
}

}  // namespace

double poisson_log_pmf(std::int64_t y, double log_rate) {
  return static_cast<double>(y) * log_rate - std::exp(log_rate) -
         std::lgamma(static_cast<double>(y) + 1.0);
}

double knot_cell_loglik(LinkFamily link, std::int64_t y, const KnotParam& knot,
                        const QuadratureRule& rule) {
  if (!(knot.var > 0.0))
    throw std::invalid_argument("knot_cell_loglik: sigma_jj must be > 0");
  const double sd = std::sqrt(knot.var);
  if (link == LinkFamily::RoundedGaussian) {
    const double cell = rg_cell(y, knot.mu, sd);
    return cell > 0.0 ? std::log(cell) : -kInf;
  }
  std::vector<double> terms(rule.order);
  for (int k = 0; k < rule.order; ++k) {
    const double x = knot.mu + sd * rule.nodes(k);
    terms[k] = std::log(rule.weights(k)) + static_cast<double>(y) * x -
               std::exp(x);
  }
  const double lse = log_sum_exp(terms);
  if (lse == -kInf) return -kInf;
  return lse - std::lgamma(static_cast<double>(y) + 1.0);
}

double knot_loglik(LinkFamily link, const KnotParam& knot, const Hist1& hist,
                   const QuadratureRule& rule) {
  if (!(knot.var > 0.0))
    throw std::invalid_argument("knot_loglik: sigma_jj must be > 0");
  const double sd = std::sqrt(knot.var);
  double total = 0.0;
  if (link == LinkFamily::RoundedGaussian) {
    for (const auto& [y, count] : hist) {
      const double cell = rg_cell(y, knot.mu, sd);
      if (!(cell > 0.0)) return -kInf;
      total += static_cast<double>(count) * std::log(cell);
    }
    return total;
  }
  // Quadrature points and their Poisson log-rate terms are shared across all
  // histogram cells, so the cost per evaluation is O(K * order).
  std::vector<double> x(rule.order), base(rule.order),
      terms(rule.order);
  for (int k = 0; k < rule.order; ++k) {
    x[k] = knot.mu + sd * rule.nodes(k);
    base[k] = std::log(rule.weights(k)) - std::exp(x[k]);
  }
  for (const auto& [y, count] : hist) {
    const double dy = static_cast<double>(y);
    for (int k = 0; k < rule.order; ++k) terms[k] = base[k] + dy * x[k];
    const double lse = log_sum_exp(terms);
    if (lse == -kInf) return -kInf;
    total +=
        static_cast<double>(count) * (lse - std::lgamma(dy + 1.0));
  }
  return total;
}

namespace {

struct TileGeometry {
  double mu_s, mu_t, sd_s, slope, cond_sd;
  bool valid;
};

TileGeometry tile_geometry(const TileParam& tile, const KnotParam& ks,
                           const KnotParam& kt) {
  TileGeometry g{};
  g.valid = ks.var > 0.0 && kt.var > 0.0 &&
            tile.cov * tile.cov < ks.var * kt.var;
  if (!g.valid) return g;
  g.mu_s = ks.mu;
  g.mu_t = kt.mu;
  g.sd_s = std::sqrt(ks.var);
  g.slope = tile.cov / ks.var;
  g.cond_sd = std::sqrt(kt.var - tile.cov * tile.cov / ks.var);
  return g;
}

double rg_pair_logcell(std::int64_t ys, std::int64_t yt, const TileParam& tile,
                       const KnotParam& ks, const KnotParam& kt) {
  Eigen::Vector2d lower(ys == 0 ? -kInf : static_cast<double>(ys) - 1.0,
                        yt == 0 ? -kInf : static_cast<double>(yt) - 1.0);
  Eigen::Vector2d upper(static_cast<double>(ys), static_cast<double>(yt));
  Eigen::Vector2d mean(ks.mu, kt.mu);
  Eigen::Matrix2d cov;
  cov << ks.var, tile.cov, tile.cov, kt.var;
  const double prob = bvn_rect(lower, upper, mean, cov);
  return prob > 0.0 ? std::log(prob) : -kInf;
}

// log of the conditional cell/pmf for coordinate t given latent x_t location.
inline double rg_cond_logcell(std::int64_t y, double mean, double sd) {
  double cell;
  if (y == 0)
    cell = normal_cdf((0.0 - mean) / sd);
  else
    cell = normal_cell((static_cast<double>(y) - 1.0 - mean) / sd,
                       (static_cast<double>(y) - mean) / sd);
  return cell > 0.0 ? std::log(cell) : -kInf;
}

// Mixed or double-Poisson cell by Gauss-Hermite over the conditional
// factorization. The outer integral runs over the Poisson coordinate s;
// a Rounded-Gaussian partner is integrated in closed form conditionally.
double gh_pair_logcell(LinkFamily link_t, std::int64_t ys, std::int64_t yt,
                       const TileGeometry& g, const QuadratureRule& rule) {
  std::vector<double> outer(rule.order), inner(rule.order);
  for (int k1 = 0; k1 < rule.order; ++k1) {
    const double xs = g.mu_s + g.sd_s * rule.nodes(k1);
    const double lp_s = poisson_log_pmf(ys, xs);
    const double cond_mean = g.mu_t + g.slope * (xs - g.mu_s);
    double lp_t;
    if (link_t == LinkFamily::PoissonLogNormal) {
      for (int k2 = 0; k2 < rule.order; ++k2) {
        const double xt = cond_mean + g.cond_sd * rule.nodes(k2);
        inner[k2] = std::log(rule.weights(k2)) + poisson_log_pmf(yt, xt);
      }
      lp_t = log_sum_exp(inner);
    } else {
      lp_t = rg_cond_logcell(yt, cond_mean, g.cond_sd);
    }
    outer[k1] = std::log(rule.weights(k1)) + lp_s + lp_t;
  }
  return log_sum_exp(outer);
}

}  // namespace

double tile_cell_loglik(LinkFamily link_s, LinkFamily link_t, std::int64_t ys,
                        std::int64_t yt, const TileParam& tile,
                        const KnotParam& knot_s, const KnotParam& knot_t,
                        const QuadratureRule& rule) {
  const TileGeometry g = tile_geometry(tile, knot_s, knot_t);
  if (!g.valid) return -kInf;
  if (link_s == LinkFamily::RoundedGaussian &&
      link_t == LinkFamily::RoundedGaussian)
    return rg_pair_logcell(ys, yt, tile, knot_s, knot_t);
  if (link_s == LinkFamily::PoissonLogNormal)
    return gh_pair_logcell(link_t, ys, yt, g, rule);
  // Swap so the Gauss-Hermite outer coordinate is the Poisson one.
  const TileGeometry gs = tile_geometry(tile, knot_t, knot_s);
  return gh_pair_logcell(link_s, yt, ys, gs, rule);
}

double tile_loglik(LinkFamily link_s, LinkFamily link_t, const TileParam& tile,
                   const KnotParam& knot_s, const KnotParam& knot_t,
                   const Hist2& hist, const QuadratureRule& rule) {
  const TileGeometry g = tile_geometry(tile, knot_s, knot_t);
  if (!g.valid) return -kInf;  // support violation, not a crash
  double total = 0.0;
  for (const auto& [pair, count] : hist) {
    const double cell = tile_cell_loglik(link_s, link_t, pair.first,
                                         pair.second, tile, knot_s, knot_t,
                                         rule);
    if (cell == -kInf) return -kInf;
    total += static_cast<double>(count) * cell;
  }
  return total;
}

}  // namespace mosaic
