#pragma once

#include <map>
#include <string>
#include <vector>

#include "mosaic/sampler.hpp"
#include "mosaic/types.hpp"

namespace mosaic {

// Unified draw matrix shared by the samplers, the CSV schema and the
// evaluator: columns are mu_1..mu_p, sigma_1_1..sigma_p_p, then the
// off-diagonals sigma_1_2..sigma_(p-1)_p in row-major pair order.
struct ParameterDraws {
  int p = 0;
  Eigen::MatrixXd values;  // M x (2p + p(p-1)/2)
  std::vector<Eigen::MatrixXd> corrected_sigma;  // optional, size M

  int draws() const { return static_cast<int>(values.rows()); }
  int columns() const { return 2 * p + pair_count(p); }
  Parameters parameters(int m) const;
};

ParameterDraws to_draws(const MosaicSamples& samples);
ParameterDraws to_draws(const std::vector<Parameters>& draws);

// Group MSE of posterior means and equal-tailed credible-interval coverage.
// Groups: mu -> means, s -> sqrt(sigma_jj), rho -> sigma_st/sqrt(...), plus
// raw sigma_diag / sigma_offdiag so either reading of the tables can be
// checked. Functions of draws are computed per draw, then summarized.
struct EvalReport {
  std::map<std::string, double> mse;
  std::map<std::string, double> coverage;
  int replicate_count = 1;
  double level = 0.95;
  int M = 0;
  bool corrected = false;
  bool coverage_unreliable = false;  // M < 40
};

EvalReport evaluate(const ParameterDraws& draws, bool corrected,
                    const Parameters& truth, double level = 0.95);

// Fills corrected_sigma with the PSD projection of each draw's assembled
// sigma; eps < 0 selects the default floor 1e-8 * max diagonal per draw.
// Returns the fraction of draws already inside the cone.
double correct_draws(ParameterDraws& draws, double eps = -1.0,
                     int workers = 1);

// Equal-tailed interval endpoints from a sorted copy (type-7 quantiles).
std::pair<double, double> equal_tailed_interval(std::vector<double> values,
                                                double level);

}  // namespace mosaic
