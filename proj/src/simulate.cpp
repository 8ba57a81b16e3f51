#include "mosaic/simulate.hpp"

#include <cmath>
#include <stdexcept>

namespace mosaic {

void TruthSpec::validate() const {
  if (p < 1) throw std::invalid_argument("TruthSpec: p must be >= 1");
  if (n < 1) throw std::invalid_argument("TruthSpec: n must be >= 1");
  if (!(mu_range.first < mu_range.second))
    throw std::invalid_argument("TruthSpec: mu_range low < high required");
  if (!(sigma_diag_range.first < sigma_diag_range.second) ||
      !(sigma_diag_range.first > 0.0))
    throw std::invalid_argument("TruthSpec: bad sigma_diag_range");
  if (!(lkj_eta > 0.0)) throw std::invalid_argument("TruthSpec: eta > 0");
}

Eigen::MatrixXd sample_lkj(int p, double eta, Rng& rng) {
  if (p < 1) throw std::invalid_argument("sample_lkj: p must be >= 1");
  if (!(eta > 0.0)) throw std::invalid_argument("sample_lkj: eta must be > 0");
  Eigen::MatrixXd R = Eigen::MatrixXd::Identity(p, p);
  if (p == 1) return R;

  double beta = eta + 0.5 * (p - 2);
  const double r = 2.0 * rng.beta(beta, beta) - 1.0;
  R(0, 1) = r;
  R(1, 0) = r;
  for (int k = 2; k < p; ++k) {
    beta -= 0.5;
    const double radius = std::sqrt(rng.beta(0.5 * k, beta));
    // direction uniform on the unit sphere in R^k
    Eigen::VectorXd u(k);
    double norm2 = 0.0;
    do {
      for (int i = 0; i < k; ++i) u(i) = rng.normal();
      norm2 = u.squaredNorm();
    } while (norm2 == 0.0);
    u *= radius / std::sqrt(norm2);

    const Eigen::MatrixXd blockL =
        Eigen::LLT<Eigen::MatrixXd>(R.topLeftCorner(k, k)).matrixL();
    const Eigen::VectorXd z = blockL * u;
    R.block(0, k, k, 1) = z;
    R.block(k, 0, 1, k) = z.transpose();
  }
  return R;
}

Eigen::MatrixXd sample_latents(const Parameters& params, std::int64_t n,
                               Rng& rng) {
  const int p = params.p();
  Eigen::LLT<Eigen::MatrixXd> llt(params.sigma);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("sample_latents: sigma must be PD");
  const Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd z(p);
  for (std::int64_t i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) z(j) = rng.normal();
    x.row(i) = (params.mu + L * z).transpose();
  }
  return x;
}

IntMatrix observe(const Eigen::MatrixXd& latents, LinkFamily link, Rng& rng) {
  IntMatrix y(latents.rows(), latents.cols());
  for (Eigen::Index i = 0; i < latents.rows(); ++i) {
    for (Eigen::Index j = 0; j < latents.cols(); ++j) {
      const double x = latents(i, j);
      if (link == LinkFamily::RoundedGaussian) {
        y(i, j) = x > 0.0 ? static_cast<std::int64_t>(std::ceil(x)) : 0;
      } else {
        y(i, j) = rng.poisson(std::exp(x));
      }
    }
  }
  return y;
}

SimulatedData simulate_dataset(const TruthSpec& truth, Rng& rng) {
  truth.validate();
  const int p = truth.p;

  Parameters params;
  params.mu.resize(p);
  Eigen::VectorXd scale(p);
  for (int j = 0; j < p; ++j) {
    params.mu(j) = rng.uniform(truth.mu_range.first, truth.mu_range.second);
    scale(j) = std::sqrt(rng.uniform(truth.sigma_diag_range.first,
                                     truth.sigma_diag_range.second));
  }
  const Eigen::MatrixXd corr = sample_lkj(p, truth.lkj_eta, rng);
  params.sigma.resize(p, p);
  for (int s = 0; s < p; ++s) {
    params.sigma(s, s) = scale(s) * scale(s);
    for (int t = s + 1; t < p; ++t) {
      const double cov = corr(s, t) * scale(s) * scale(t);
      params.sigma(s, t) = cov;
      params.sigma(t, s) = cov;
    }
  }

  SimulatedData out;
  out.truth = params;
  out.latents = sample_latents(params, truth.n, rng);
  out.y = observe(out.latents, truth.link, rng);
  return out;
}

}  // namespace mosaic
