#include "mosaic/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mosaic/parallel.hpp"
#include "mosaic/projection.hpp"

namespace mosaic {

Parameters ParameterDraws::parameters(int m) const {
  Parameters theta;
  theta.mu.resize(p);
  theta.sigma.resize(p, p);
  for (int j = 0; j < p; ++j) {
    theta.mu(j) = values(m, j);
    theta.sigma(j, j) = values(m, p + j);
  }
  for (int k = 0; k < pair_count(p); ++k) {
    const auto [s, t] = pair_from_index(k, p);
    theta.sigma(s, t) = values(m, 2 * p + k);
    theta.sigma(t, s) = values(m, 2 * p + k);
  }
  return theta;
}

ParameterDraws to_draws(const MosaicSamples& samples) {
  ParameterDraws out;
  out.p = samples.p;
  const int npairs = pair_count(samples.p);
  out.values.resize(samples.M, out.columns());
  for (int m = 0; m < samples.M; ++m) {
    for (int j = 0; j < samples.p; ++j) {
      out.values(m, j) = samples.knot(m, j).mu;
      out.values(m, samples.p + j) = samples.knot(m, j).var;
    }
    for (int k = 0; k < npairs; ++k)
      out.values(m, 2 * samples.p + k) = samples.tile(m, k).cov;
  }
  out.corrected_sigma = samples.corrected_sigma;
  return out;
}

ParameterDraws to_draws(const std::vector<Parameters>& draws) {
  if (draws.empty()) throw std::invalid_argument("to_draws: no draws");
  ParameterDraws out;
  out.p = draws.front().p();
  out.values.resize(static_cast<int>(draws.size()), out.columns());
  for (int m = 0; m < static_cast<int>(draws.size()); ++m) {
    const Parameters& theta = draws[m];
    for (int j = 0; j < out.p; ++j) {
      out.values(m, j) = theta.mu(j);
      out.values(m, out.p + j) = theta.sigma(j, j);
    }
    for (int k = 0; k < pair_count(out.p); ++k) {
      const auto [s, t] = pair_from_index(k, out.p);
      out.values(m, 2 * out.p + k) = theta.sigma(s, t);
    }
  }
  return out;
}

std::pair<double, double> equal_tailed_interval(std::vector<double> values,
                                                double level) {
  if (values.empty())
    throw std::invalid_argument("equal_tailed_interval: empty sample");
  std::sort(values.begin(), values.end());
  const auto quantile = [&](double q) {
    const double h = q * (static_cast<double>(values.size()) - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double w = h - std::floor(h);
    return (1.0 - w) * values[lo] + w * values[hi];
  };
  const double alpha = 0.5 * (1.0 - level);
  return {quantile(alpha), quantile(1.0 - alpha)};
}

namespace {

struct GroupAccumulator {
  double sq_error_sum = 0.0;
  int covered = 0;
  int count = 0;

  void add(const std::vector<double>& draws, double truth, double level) {
    double mean = 0.0;
    for (double v : draws) mean += v;
    mean /= static_cast<double>(draws.size());
    sq_error_sum += (mean - truth) * (mean - truth);
    const auto [lo, hi] = equal_tailed_interval(draws, level);
    covered += (lo <= truth && truth <= hi) ? 1 : 0;
    ++count;
  }
};

}  // namespace

EvalReport evaluate(const ParameterDraws& draws, bool corrected,
                    const Parameters& truth, double level) {
  const int M = draws.draws();
  if (M < 1) throw std::invalid_argument("evaluate: no draws");
  const int p = draws.p;
  if (truth.p() != p)
    throw std::invalid_argument("evaluate: truth dimension mismatch");
  if (corrected && static_cast<int>(draws.corrected_sigma.size()) != M)
    throw std::invalid_argument(
        "evaluate: corrected requested but corrected draws are missing");

  EvalReport report;
  report.level = level;
  report.M = M;
  report.corrected = corrected;
  report.coverage_unreliable = M < 40;

  const auto sigma_entry = [&](int m, int a, int b) -> double {
    if (corrected) return draws.corrected_sigma[m](a, b);
    if (a == b) return draws.values(m, p + a);
    const int k = pair_index(std::min(a, b), std::max(a, b), p);
    return draws.values(m, 2 * p + k);
  };

  GroupAccumulator mu_acc, s_acc, rho_acc, sdiag_acc, soff_acc;
  std::vector<double> buffer(M);

  for (int j = 0; j < p; ++j) {
    for (int m = 0; m < M; ++m) buffer[m] = draws.values(m, j);
    mu_acc.add(buffer, truth.mu(j), level);
  }
  for (int j = 0; j < p; ++j) {
    for (int m = 0; m < M; ++m) buffer[m] = sigma_entry(m, j, j);
    sdiag_acc.add(buffer, truth.sigma(j, j), level);
    for (int m = 0; m < M; ++m) buffer[m] = std::sqrt(sigma_entry(m, j, j));
    s_acc.add(buffer, std::sqrt(truth.sigma(j, j)), level);
  }
  for (int k = 0; k < pair_count(p); ++k) {
    const auto [s, t] = pair_from_index(k, p);
    for (int m = 0; m < M; ++m) buffer[m] = sigma_entry(m, s, t);
    soff_acc.add(buffer, truth.sigma(s, t), level);
    for (int m = 0; m < M; ++m) {
      const double denom =
          std::sqrt(sigma_entry(m, s, s) * sigma_entry(m, t, t));
      buffer[m] = sigma_entry(m, s, t) / denom;
    }
    const double rho_truth =
        truth.sigma(s, t) / std::sqrt(truth.sigma(s, s) * truth.sigma(t, t));
    rho_acc.add(buffer, rho_truth, level);
  }

  const auto emit = [&](const std::string& name, const GroupAccumulator& acc) {
    if (acc.count == 0) return;
    report.mse[name] = acc.sq_error_sum / acc.count;
    report.coverage[name] = static_cast<double>(acc.covered) / acc.count;
  };
  emit("mu", mu_acc);
  emit("s", s_acc);
  emit("rho", rho_acc);
  emit("sigma_diag", sdiag_acc);
  emit("sigma_offdiag", soff_acc);
  return report;
}

double correct_draws(ParameterDraws& draws, double eps, int workers) {
  const int M = draws.draws();
  draws.corrected_sigma.assign(M, Eigen::MatrixXd());
  std::vector<int> already_pd(M, 0);
  parallel_tasks(M, workers, [&](std::size_t m) {
    const Eigen::MatrixXd sigma =
        draws.parameters(static_cast<int>(m)).sigma;
    const double floor = eps >= 0.0 ? eps : 1e-8 * sigma.diagonal().maxCoeff();
    const EigenDecomposition ed = symmetric_eigen(sigma);
    if (ed.values.minCoeff() >= floor) {
      draws.corrected_sigma[m] = sigma;
      already_pd[m] = 1;
      return;
    }
    Eigen::VectorXd clamped = ed.values.cwiseMax(floor);
    Eigen::MatrixXd B =
        ed.vectors * clamped.asDiagonal() * ed.vectors.transpose();
    draws.corrected_sigma[m] = 0.5 * (B + B.transpose()).eval();
  });
  double frac = 0.0;
  for (int flag : already_pd) frac += flag;
  return M > 0 ? frac / M : 1.0;
}

}  // namespace mosaic
