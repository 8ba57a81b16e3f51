#include "mosaic/sampler.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mosaic/mh.hpp"
#include "mosaic/parallel.hpp"
#include "mosaic/rng.hpp"

namespace mosaic {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double seconds_since(
    const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}
}  // namespace

std::string to_string(TileStrategy strategy) {
  switch (strategy) {
    case TileStrategy::ShortMH:
      return "shortmh";
    case TileStrategy::Laplace:
      return "laplace";
    case TileStrategy::PlugIn:
      return "plugin";
  }
  throw std::logic_error("unknown tile strategy");
}

TileStrategy tile_strategy_from_string(const std::string& name) {
  if (name == "shortmh" || name == "short_mh") return TileStrategy::ShortMH;
  if (name == "laplace") return TileStrategy::Laplace;
  if (name == "plugin" || name == "plug_in") return TileStrategy::PlugIn;
  throw std::invalid_argument("unknown tile strategy: " + name);
}

void ChainConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("ChainConfig: iterations");
  if (burn_in < 0 || burn_in >= iterations)
    throw std::invalid_argument("ChainConfig: burn_in must be in [0, iterations)");
  if (thin < 1) throw std::invalid_argument("ChainConfig: thin");
  if (retained() < 1)
    throw std::invalid_argument("ChainConfig: no retained draws");
  if (tile_inner_steps < 1)
    throw std::invalid_argument("ChainConfig: tile_inner_steps");
  if (tile_iterations < 1 || tile_burn_in < 0 ||
      tile_burn_in >= tile_iterations)
    throw std::invalid_argument("ChainConfig: tile chain schedule");
}

Eigen::MatrixXd MosaicSamples::sigma_draw(int m) const {
  Eigen::MatrixXd sigma(p, p);
  for (int j = 0; j < p; ++j) sigma(j, j) = knot(m, j).var;
  for (int k = 0; k < pair_count(p); ++k) {
    const TileParam& t = tile(m, k);
    sigma(t.s, t.t) = t.cov;
    sigma(t.t, t.s) = t.cov;
  }
  return sigma;
}

Parameters MosaicSamples::draw(int m) const {
  Parameters theta;
  theta.mu.resize(p);
  for (int j = 0; j < p; ++j) theta.mu(j) = knot(m, j).mu;
  theta.sigma = sigma_draw(m);
  return theta;
}

namespace {

struct KnotTarget {
  LinkFamily link;
  const Hist1& hist;
  const PriorConfig& prior;
  const QuadratureRule& rule;

  // Target on (mu, log sigma): kappa density times the Jacobian e^u, i.e.
  // Q + log pi + u = Q + u/2 inside the prior box.
  double operator()(double m, double u) const {
    if (!(std::abs(m) < prior.A)) return -kInf;
    if (!(u < std::log(prior.B))) return -kInf;
    const double v = std::exp(u);
    if (!(v > 0.0)) return -kInf;
    return knot_loglik(link, {m, v}, hist, rule) + 0.5 * u;
  }
};

std::pair<double, double> knot_moment_init(LinkFamily link, const Hist1& hist,
                                           const PriorConfig& prior) {
  double n = 0.0, sum = 0.0, sumsq = 0.0;
  for (const auto& [y, c] : hist) {
    const double dy = static_cast<double>(y);
    const double dc = static_cast<double>(c);
    n += dc;
    sum += dc * dy;
    sumsq += dc * dy * dy;
  }
  const double mean = sum / n;
  const double var = std::max(sumsq / n - mean * mean, 1e-6);
  double mu0, v0;
  if (link == LinkFamily::RoundedGaussian) {
    mu0 = mean - 0.5;
    v0 = std::max(var, 0.05);
  } else {
    // Match lognormal-mixture moments: E y = e^{mu + v/2},
    // (Var y - E y) / (E y)^2 = e^v - 1.
    const double m = std::max(mean, 0.5 / n);
    v0 = std::log1p(std::max(var - m, 0.0) / (m * m));
    v0 = std::clamp(v0, 0.02, 0.9 * prior.B);
    mu0 = std::log(m) - 0.5 * v0;
  }
  mu0 = std::clamp(mu0, -0.99 * prior.A, 0.99 * prior.A);
  v0 = std::clamp(v0, 1e-4, 0.95 * prior.B);
  return {mu0, std::log(v0)};
}

struct KnotInit {
  double m, u;
  double scale_m, scale_u;
};

KnotInit knot_chain_init(const KnotTarget& target, LinkFamily link,
                         const Hist1& hist, const PriorConfig& prior) {
  auto [m0, u0] = knot_moment_init(link, hist, prior);
  // Coarse local grid around the moment estimate.
  double best_m = m0, best_u = u0, best = target(m0, u0);
  for (int i = -4; i <= 4; ++i) {
    for (int j = -4; j <= 4; ++j) {
      const double m = m0 + 0.5 * i;
      const double u = u0 + 0.5 * j;
      const double v = target(m, u);
      if (v > best) {
        best = v;
        best_m = m;
        best_u = u;
      }
    }
  }
  if (best == -kInf)
    throw std::runtime_error("sample_knot: could not find a valid start");

  // Proposal scales from the local curvature (2.4/sqrt(d) * posterior sd).
  KnotInit init{best_m, best_u, 0.1, 0.1};
  const double h = 1e-3;
  const double f0 = best;
  const double fpm = target(best_m + h, best_u);
  const double fmm = target(best_m - h, best_u);
  const double fpu = target(best_m, best_u + h);
  const double fmu = target(best_m, best_u - h);
  const double hmm = (fpm - 2.0 * f0 + fmm) / (h * h);
  const double huu = (fpu - 2.0 * f0 + fmu) / (h * h);
  if (std::isfinite(hmm) && hmm < 0.0 && std::isfinite(huu) && huu < 0.0) {
    const double c = 2.4 / std::sqrt(2.0);
    init.scale_m = std::clamp(c / std::sqrt(-hmm), 1e-5, 2.0);
    init.scale_u = std::clamp(c / std::sqrt(-huu), 1e-5, 2.0);
  }
  return init;
}

}  // namespace

KnotChainResult sample_knot(LinkFamily link, const Hist1& hist,
                            const PriorConfig& prior, const ChainConfig& cfg,
                            int chain_id) {
  cfg.validate();
  if (hist.empty()) throw std::invalid_argument("sample_knot: empty histogram");
  const QuadratureRule rule = gauss_hermite_rule(cfg.knot_quad_order);
  const KnotTarget target{link, hist, prior, rule};
  Rng rng(derive_seed(cfg.seed, StreamKind::Knot,
                      static_cast<std::uint64_t>(chain_id)));

  KnotInit init = knot_chain_init(target, link, hist, prior);
  if (cfg.proposal_scale > 0.0) {
    init.scale_m = cfg.proposal_scale;
    init.scale_u = cfg.proposal_scale;
  }

  double m = init.m, u = init.u;
  double logp = target(m, u);
  ScaleAdapter adapter;
  double factor = 1.0;
  const int M = cfg.retained();

  KnotChainResult result;
  result.draws.reserve(M);
  long long accepted = 0, proposals = 0;
  for (int it = 0; it < cfg.iterations; ++it) {
    const bool in_burn = it < cfg.burn_in;
    const double f = in_burn ? adapter.factor() : factor;
    const bool acc = mh_step_2d(m, u, logp, target, init.scale_m * f,
                                init.scale_u * f, rng);
    if (in_burn) {
      adapter.update(acc);
      if (it + 1 == cfg.burn_in) factor = adapter.factor();
    } else {
      accepted += acc ? 1 : 0;
      ++proposals;
      const int post = it - cfg.burn_in;
      if (post % cfg.thin == 0 && post / cfg.thin < M)
        result.draws.push_back({m, std::exp(u)});
    }
  }
  result.acceptance =
      proposals > 0 ? static_cast<double>(accepted) / proposals : 0.0;
  result.zero_acceptance = accepted == 0;
  return result;
}

namespace {

struct TileTarget {
  LinkFamily link_s, link_t;
  int s, t;
  const KnotParam& knot_s;
  const KnotParam& knot_t;
  const Hist2& hist;
  const QuadratureRule& rule;
  double bound;

  double operator()(double cov) const {
    if (!(std::abs(cov) < bound)) return -kInf;
    return tile_loglik(link_s, link_t, {s, t, cov}, knot_s, knot_t, hist,
                       rule);
  }
};

TileParam short_mh_impl(const TileTarget& target, const ChainConfig& cfg,
                        int m, double warm_start, Rng& rng,
                        double* acceptance) {
  double x = (m == 0) ? 0.0 : warm_start;
  if (!(std::abs(x) < target.bound)) x = 0.0;  // zero is always in support
  double logp = target(x);
  const double scale = 0.1 * target.bound;
  int accepted = 0;
  for (int step = 0; step < cfg.tile_inner_steps; ++step)
    accepted += mh_step_1d(x, logp, target, scale, rng) ? 1 : 0;
  if (acceptance)
    *acceptance = static_cast<double>(accepted) / cfg.tile_inner_steps;
  return {target.s, target.t, x};
}

}  // namespace

TileParam sample_tile_short_mh(LinkFamily link_s, LinkFamily link_t, int s,
                               int t, const KnotParam& knot_s,
                               const KnotParam& knot_t, const Hist2& hist,
                               const PriorConfig&, const ChainConfig& cfg,
                               int chain_id, int m, double warm_start,
                               const QuadratureRule& rule,
                               double* acceptance) {
  const double bound = std::sqrt(knot_s.var * knot_t.var);
  const TileTarget target{link_s, link_t, s,    t,   knot_s,
                          knot_t, hist,   rule, bound};
  Rng rng(derive_seed(cfg.seed, StreamKind::Tile,
                      static_cast<std::uint64_t>(chain_id),
                      static_cast<std::uint64_t>(m)));
  return short_mh_impl(target, cfg, m, warm_start, rng, acceptance);
}

TileParam sample_tile_laplace(LinkFamily link_s, LinkFamily link_t, int s,
                              int t, const KnotParam& knot_s,
                              const KnotParam& knot_t, const Hist2& hist,
                              const PriorConfig&, const ChainConfig& cfg,
                              int chain_id, int m, double warm_start,
                              const QuadratureRule& rule, int* fallbacks,
                              double* acceptance) {
  const double bound = std::sqrt(knot_s.var * knot_t.var);
  const TileTarget target{link_s, link_t, s,    t,   knot_s,
                          knot_t, hist,   rule, bound};
  Rng rng(derive_seed(cfg.seed, StreamKind::Tile,
                      static_cast<std::uint64_t>(chain_id),
                      static_cast<std::uint64_t>(m)));

  const LaplaceFit1d fit =
      laplace_fit_1d(target, -bound, bound, 1e-8 * bound, 1e-4 * bound);
  if (!fit.concave) {
    if (fallbacks) ++*fallbacks;
    return short_mh_impl(target, cfg, m, warm_start, rng, acceptance);
  }
  const double mode = fit.mode;
  const double sd = std::sqrt(-1.0 / fit.curvature);
  for (int attempt = 1; attempt <= 100; ++attempt) {
    const double x = mode + sd * rng.normal();
    if (std::abs(x) < bound) {
      if (acceptance) *acceptance = 1.0 / attempt;
      return {s, t, x};
    }
  }
  if (fallbacks) ++*fallbacks;
  return short_mh_impl(target, cfg, m, warm_start, rng, acceptance);
}

std::vector<TileParam> sample_tile_plugin(LinkFamily link_s, LinkFamily link_t,
                                          int s, int t,
                                          const KnotParam& mean_s,
                                          const KnotParam& mean_t,
                                          const Hist2& hist,
                                          const PriorConfig&,
                                          const ChainConfig& cfg, int chain_id,
                                          int M, const QuadratureRule& rule,
                                          double* acceptance) {
  if (M < 1) throw std::invalid_argument("sample_tile_plugin: M must be >= 1");
  const double bound = std::sqrt(mean_s.var * mean_t.var);
  const TileTarget target{link_s, link_t, s,    t,   mean_s,
                          mean_t, hist,   rule, bound};
  Rng rng(derive_seed(cfg.seed, StreamKind::TilePlugin,
                      static_cast<std::uint64_t>(chain_id)));

  const int avail = cfg.tile_iterations - cfg.tile_burn_in;
  const int thin = std::max(1, avail / M);
  const int total = cfg.tile_burn_in + thin * M;

  double x = 0.0;
  double logp = target(x);
  const double base_scale = 0.1 * bound;
  ScaleAdapter adapter;
  double factor = 1.0;
  std::vector<TileParam> draws;
  draws.reserve(M);
  long long accepted = 0, proposals = 0;
  for (int it = 0; it < total; ++it) {
    const bool in_burn = it < cfg.tile_burn_in;
    const double f = in_burn ? adapter.factor() : factor;
    const bool acc = mh_step_1d(x, logp, target, base_scale * f, rng);
    if (in_burn) {
      adapter.update(acc);
      if (it + 1 == cfg.tile_burn_in) factor = adapter.factor();
    } else {
      accepted += acc ? 1 : 0;
      ++proposals;
      const int post = it - cfg.tile_burn_in;
      if (post % thin == thin - 1 && static_cast<int>(draws.size()) < M)
        draws.push_back({s, t, x});
    }
  }
  if (acceptance)
    *acceptance =
        proposals > 0 ? static_cast<double>(accepted) / proposals : 0.0;
  return draws;
}

MosaicSamples run_mosaic(const ModelSpec& spec, const CompressedDataset& data,
                         const PriorConfig& prior, const ChainConfig& cfg,
                         int workers) {
  spec.validate();
  cfg.validate();
  if (spec.p != data.p)
    throw std::invalid_argument("run_mosaic: spec.p != data.p");
  if (static_cast<int>(data.uni.size()) != data.p ||
      static_cast<int>(data.biv.size()) != pair_count(data.p))
    throw std::invalid_argument("run_mosaic: malformed CompressedDataset");

  const int p = spec.p;
  const int npairs = pair_count(p);
  const int M = cfg.retained();

  MosaicSamples out;
  out.p = p;
  out.M = M;
  out.knots.resize(static_cast<std::size_t>(M) * p);
  out.tiles.resize(static_cast<std::size_t>(M) * npairs);
  out.knot_acceptance.resize(p);
  out.tile_acceptance.assign(npairs, 0.0);
  out.laplace_fallbacks.assign(npairs, 0);

  // Step 1: knot marginals in parallel.
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<KnotChainResult> knot_results(p);
  parallel_tasks(p, workers, [&](std::size_t j) {
    knot_results[j] =
        sample_knot(spec.links[j], data.uni[j], prior, cfg, static_cast<int>(j));
  });
  for (int j = 0; j < p; ++j) {
    out.knot_acceptance[j] = knot_results[j].acceptance;
    if (knot_results[j].zero_acceptance) out.zero_acceptance_chains.push_back(j);
    for (int m = 0; m < M; ++m)
      out.knots[static_cast<std::size_t>(m) * p + j] =
          knot_results[j].draws[m];
  }
  out.knot_seconds = seconds_since(t0);

  // Step 2: tile conditionals in parallel, aligned with the knot draws.
  const auto t1 = std::chrono::steady_clock::now();
  const QuadratureRule tile_rule = gauss_hermite_rule(cfg.tile_quad_order);

  std::vector<KnotParam> knot_means(p);
  if (cfg.tile_strategy == TileStrategy::PlugIn) {
    for (int j = 0; j < p; ++j) {
      double sm = 0.0, sv = 0.0;
      for (int m = 0; m < M; ++m) {
        sm += out.knot(m, j).mu;
        sv += out.knot(m, j).var;
      }
      knot_means[j] = {sm / M, sv / M};
    }
  }

  parallel_tasks(npairs, workers, [&](std::size_t k) {
    const auto [s, t] = pair_from_index(static_cast<int>(k), p);
    const Hist2& hist = data.biv[k];
    if (cfg.tile_strategy == TileStrategy::PlugIn) {
      double acc = 0.0;
      auto draws = sample_tile_plugin(spec.links[s], spec.links[t], s, t,
                                      knot_means[s], knot_means[t], hist,
                                      prior, cfg, static_cast<int>(k), M,
                                      tile_rule, &acc);
      for (int m = 0; m < M; ++m)
        out.tiles[static_cast<std::size_t>(m) * npairs + k] = draws[m];
      out.tile_acceptance[k] = acc;
      return;
    }
    double warm = 0.0;
    double acc_sum = 0.0;
    int fallbacks = 0;
    for (int m = 0; m < M; ++m) {
      const KnotParam& ks = out.knot(m, s);
      const KnotParam& kt = out.knot(m, t);
      double acc = 0.0;
      TileParam draw =
          cfg.tile_strategy == TileStrategy::Laplace
              ? sample_tile_laplace(spec.links[s], spec.links[t], s, t, ks, kt,
                                    hist, prior, cfg, static_cast<int>(k), m,
                                    warm, tile_rule, &fallbacks, &acc)
              : sample_tile_short_mh(spec.links[s], spec.links[t], s, t, ks,
                                     kt, hist, prior, cfg, static_cast<int>(k),
                                     m, warm, tile_rule, &acc);
      out.tiles[static_cast<std::size_t>(m) * npairs + k] = draw;
      warm = draw.cov;
      acc_sum += acc;
    }
    out.tile_acceptance[k] = acc_sum / M;
    out.laplace_fallbacks[k] = fallbacks;
  });
  out.tile_seconds = seconds_since(t1);
  return out;
}

PosteriorMean posterior_mean(const MosaicSamples& samples) {
  if (samples.M < 1)
    throw std::invalid_argument("posterior_mean: no draws");
  const int p = samples.p;
  const int npairs = pair_count(p);
  std::vector<KnotParam> knots(p, {0.0, 0.0});
  std::vector<TileParam> tiles(npairs);
  for (int m = 0; m < samples.M; ++m) {
    for (int j = 0; j < p; ++j) {
      knots[j].mu += samples.knot(m, j).mu;
      knots[j].var += samples.knot(m, j).var;
    }
    for (int k = 0; k < npairs; ++k) {
      const TileParam& t = samples.tile(m, k);
      tiles[k].s = t.s;
      tiles[k].t = t.t;
      tiles[k].cov += t.cov;
    }
  }
  for (auto& k : knots) {
    k.mu /= samples.M;
    k.var /= samples.M;
  }
  for (auto& t : tiles) t.cov /= samples.M;

  PosteriorMean out;
  out.params = assemble_parameters(knots, tiles);
  if (!samples.corrected_sigma.empty()) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p, p);
    for (const auto& sigma : samples.corrected_sigma) acc += sigma;
    out.corrected_sigma = acc / static_cast<double>(samples.M);
  }
  return out;
}

}  // namespace mosaic
