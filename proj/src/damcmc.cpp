#include "mosaic/damcmc.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mosaic/marginals.hpp"
#include "mosaic/parallel.hpp"

namespace mosaic {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double link_log_pdf(LinkFamily link, std::int64_t y, double x) {
  if (link == LinkFamily::PoissonLogNormal) return poisson_log_pmf(y, x);
  // RoundedGaussian: y = 0 <=> x <= 0, y >= 1 <=> x in (y-1, y]
  if (y == 0) return x <= 0.0 ? 0.0 : -kInf;
  const double dy = static_cast<double>(y);
  return (dy - 1.0 < x && x <= dy) ? 0.0 : -kInf;
}

double update_latents(AugmentedState& state, const IntMatrix& raw,
                      const ModelSpec& spec, std::uint64_t master_seed,
                      double step_factor, int workers) {
  const auto links = [&spec](int j, std::int64_t y, double x) {
    return link_log_pdf(spec.links[j], y, x);
  };
  return latent_sweep(state.latents, raw, links, state.params, master_seed,
                      state.iteration, step_factor, workers);
}

void update_params(AugmentedState& state, Rng& rng) {
  const auto n = state.latents.rows();
  const int p = static_cast<int>(state.latents.cols());
  if (n <= p)
    throw std::invalid_argument("update_params: need n > p");

  const Eigen::VectorXd xbar = state.latents.colwise().mean();
  const Eigen::MatrixXd centered = state.latents.rowwise() - xbar.transpose();
  Eigen::MatrixXd scatter = centered.transpose() * centered;
  scatter = 0.5 * (scatter + scatter.transpose()).eval();

  Eigen::LLT<Eigen::MatrixXd> llt(scatter);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(
        "update_params: singular latent scatter; increase the sample size");
  const Eigen::MatrixXd Ls = llt.matrixL();

  // Bartlett draw of W ~ Wishart(n-1, S^{-1}); Sigma = W^{-1} ~ IW(n-1, S).
  const double dof = static_cast<double>(n - 1);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    A(i, i) = std::sqrt(rng.chi_squared(dof - i));
    for (int j = 0; j < i; ++j) A(i, j) = rng.normal();
  }
  // Sigma = (Ls A^{-T}) (Ls A^{-T})^T via the triangular solve A M = Ls^T.
  const Eigen::MatrixXd M = A.triangularView<Eigen::Lower>().solve(
      Eigen::MatrixXd(Ls.transpose()));
  Eigen::MatrixXd sigma = M.transpose() * M;
  sigma = 0.5 * (sigma + sigma.transpose()).eval();

  Eigen::LLT<Eigen::MatrixXd> sig_llt(sigma);
  const Eigen::MatrixXd Lsig = sig_llt.matrixL();
  Eigen::VectorXd z(p);
  for (int j = 0; j < p; ++j) z(j) = rng.normal();
  state.params.mu = xbar + Lsig * z / std::sqrt(static_cast<double>(n));
  state.params.sigma = sigma;
}

namespace {

Eigen::MatrixXd init_latents(const ModelSpec& spec, const IntMatrix& raw,
                             const Parameters& params) {
  const auto n = raw.rows();
  const int p = spec.p;
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) {
      const std::int64_t y = raw(i, j);
      if (spec.links[j] == LinkFamily::RoundedGaussian) {
        // start inside the observation's cell
        x(i, j) = y == 0 ? std::min(-0.5, params.mu(j))
                         : static_cast<double>(y) - 0.5;
      } else {
        x(i, j) = y == 0 ? std::min(params.mu(j), std::log(0.5))
                         : std::log(static_cast<double>(y) + 0.5);
      }
    }
  }
  return x;
}

Parameters moment_init(const ModelSpec& spec, const IntMatrix& raw) {
  const auto n = raw.rows();
  const int p = spec.p;
  Parameters params;
  params.mu.resize(p);
  params.sigma = Eigen::MatrixXd::Zero(p, p);
  for (int j = 0; j < p; ++j) {
    double sum = 0.0, sumsq = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double y = static_cast<double>(raw(i, j));
      sum += y;
      sumsq += y * y;
    }
    const double mean = sum / static_cast<double>(n);
    const double var =
        std::max(sumsq / static_cast<double>(n) - mean * mean, 1e-4);
    if (spec.links[j] == LinkFamily::RoundedGaussian) {
      params.mu(j) = mean - 0.5;
      params.sigma(j, j) = std::max(var, 0.05);
    } else {
      const double m = std::max(mean, 0.5 / static_cast<double>(n));
      double v = std::log1p(std::max(var - m, 0.0) / (m * m));
      v = std::clamp(v, 0.05, 5.0);
      params.mu(j) = std::log(m) - 0.5 * v;
      params.sigma(j, j) = v;
    }
  }
  return params;
}

}  // namespace

DamcmcResult run_damcmc(const ModelSpec& spec, const IntMatrix& raw,
                        const DamcmcConfig& cfg,
                        const Parameters* init_params, int workers) {
  spec.validate();
  if (raw.cols() != spec.p)
    throw std::invalid_argument("run_damcmc: data dimension != spec.p");
  if (raw.rows() <= spec.p)
    throw std::invalid_argument("run_damcmc: need n > p");
  if (cfg.budget_seconds <= 0.0 && cfg.iterations < 1)
    throw std::invalid_argument("run_damcmc: empty iteration budget");

  AugmentedState state;
  state.params = init_params ? *init_params : moment_init(spec, raw);
  state.latents = init_latents(spec, raw, state.params);
  state.iteration = 0;

  Rng param_rng(derive_seed(cfg.seed, StreamKind::Params));
  DamcmcResult result;
  std::vector<Parameters> trace;
  if (cfg.budget_seconds <= 0.0) trace.reserve(cfg.iterations);

  const auto start = std::chrono::steady_clock::now();
  double accept_sum = 0.0;
  for (;;) {
    const auto t0 = std::chrono::steady_clock::now();
    accept_sum += update_latents(state, raw, spec, cfg.seed,
                                 cfg.latent_step_factor, workers);
    const auto t1 = std::chrono::steady_clock::now();
    update_params(state, param_rng);
    const auto t2 = std::chrono::steady_clock::now();
    result.latent_seconds += std::chrono::duration<double>(t1 - t0).count();
    result.param_seconds += std::chrono::duration<double>(t2 - t1).count();
    ++state.iteration;
    trace.push_back(state.params);

    if (cfg.budget_seconds > 0.0) {
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                        start)
              .count();
      if (elapsed >= cfg.budget_seconds) break;
    } else if (state.iteration >= cfg.iterations) {
      break;
    }
  }
  result.sweeps = state.iteration;
  result.latent_acceptance = accept_sum / static_cast<double>(result.sweeps);

  const long long recorded = static_cast<long long>(trace.size());
  long long burn = cfg.burn_in >= 0 ? cfg.burn_in : recorded / 2;
  if (burn >= recorded) burn = recorded - 1;
  const long long avail = recorded - burn;
  const long long keep =
      std::min<long long>(std::max(cfg.thin_target, 1), avail);
  result.draws.reserve(keep);
  for (long long k = 0; k < keep; ++k) {
    // evenly spaced over the post burn-in trace, last draw included
    const long long idx = burn + ((k + 1) * avail) / keep - 1;
    result.draws.push_back(trace[idx]);
  }
  return result;
}

}  // namespace mosaic
