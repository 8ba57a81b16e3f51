#pragma once

#include <atomic>
#include <cmath>
#include <limits>

#include "mosaic/parallel.hpp"
#include "mosaic/rng.hpp"
#include "mosaic/types.hpp"

namespace mosaic {

// One sweep of per-coordinate random-walk MH on the latent matrix targeting
// h_j(y_ij | x_ij) phi(x_i | mu, Sigma). The link log-density is a callable
// (j, y, x) -> double so tests can substitute degenerate links. Rows are
// independent given the parameters and run in parallel on per-(sweep, row)
// RNG substreams, so any worker count gives identical output. Returns the
// acceptance rate of the sweep.
template <class LinkLogPdf>
double latent_sweep(Eigen::MatrixXd& x, const IntMatrix& y,
                    const LinkLogPdf& link_logpdf, const Parameters& params,
                    std::uint64_t master_seed, long long sweep,
                    double step_factor, int workers) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const auto n = x.rows();
  const int p = static_cast<int>(x.cols());
  const Eigen::MatrixXd prec =
      params.sigma.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  Eigen::VectorXd cond_var(p), step(p);
  for (int j = 0; j < p; ++j) {
    cond_var(j) = 1.0 / prec(j, j);
    step(j) = step_factor * std::sqrt(cond_var(j));
  }

  std::atomic<long long> accepted{0};
  parallel_tasks(static_cast<std::size_t>(n), workers, [&](std::size_t i) {
    Rng rng(derive_seed(master_seed, StreamKind::Latent,
                        static_cast<std::uint64_t>(sweep),
                        static_cast<std::uint64_t>(i)));
    // w = prec * (x_i - mu), maintained incrementally across coordinates
    Eigen::VectorXd w = prec * (x.row(i).transpose() - params.mu);
    long long local = 0;
    for (int j = 0; j < p; ++j) {
      const double xij = x(i, j);
      const double cm = params.mu(j) -
                        cond_var(j) * (w(j) - prec(j, j) * (xij - params.mu(j)));
      const double proposal = xij + step(j) * rng.normal();
      const double dlink =
          link_logpdf(j, y(i, j), proposal) - link_logpdf(j, y(i, j), xij);
      if (dlink == -inf) continue;
      const double dprior =
          (-(proposal - cm) * (proposal - cm) + (xij - cm) * (xij - cm)) /
          (2.0 * cond_var(j));
      const double dlog = dlink + dprior;
      if (dlog >= 0.0 || std::log(rng.uniform_pos()) < dlog) {
        const double delta = proposal - xij;
        x(i, j) = proposal;
        w += delta * prec.col(j);
        ++local;
      }
    }
    accepted.fetch_add(local);
  });
  return static_cast<double>(accepted.load()) / (static_cast<double>(n) * p);
}

}  // namespace mosaic
