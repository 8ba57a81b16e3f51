#pragma once

#include <Eigen/Dense>

namespace mosaic {

double normal_cdf(double z);
double normal_sf(double z);  // upper tail
double normal_pdf(double z);

// P(a < Z <= b) for standard normal Z; a = -inf and b = +inf are allowed.
// Uses tail-matched differencing so far cells keep relative accuracy.
double normal_cell(double a, double b);

// P(X <= x, Y <= y) for standard bivariate normal with correlation rho,
// Drezner-Genz quadrature over the correlation; absolute error < 5e-16.
double bvn_cdf(double x, double y, double rho);

// P(lower <= X <= upper) componentwise for X ~ N(mean, cov), cov 2x2 PD.
// Infinite bounds allowed. Throws on |correlation| >= 1 - 1e-12.
double bvn_rect(const Eigen::Vector2d& lower, const Eigen::Vector2d& upper,
                const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov);

}  // namespace mosaic
