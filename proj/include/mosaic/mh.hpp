#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "mosaic/rng.hpp"

namespace mosaic {

// Gaussian random-walk Metropolis steps over log densities that may return
// -inf outside their support (such proposals are rejected outright).

template <class LogTarget>
bool mh_step_1d(double& x, double& logp, const LogTarget& logtarget,
                double scale, Rng& rng) {
  const double proposal = x + scale * rng.normal();
  const double lp = logtarget(proposal);
  if (lp == -std::numeric_limits<double>::infinity()) return false;
  if (lp - logp >= 0.0 || std::log(rng.uniform_pos()) < lp - logp) {
    x = proposal;
    logp = lp;
    return true;
  }
  return false;
}

template <class LogTarget>
bool mh_step_2d(double& x0, double& x1, double& logp,
                const LogTarget& logtarget, double scale0, double scale1,
                Rng& rng) {
  const double p0 = x0 + scale0 * rng.normal();
  const double p1 = x1 + scale1 * rng.normal();
  const double lp = logtarget(p0, p1);
  if (lp == -std::numeric_limits<double>::infinity()) return false;
  if (lp - logp >= 0.0 || std::log(rng.uniform_pos()) < lp - logp) {
    x0 = p0;
    x1 = p1;
    logp = lp;
    return true;
  }
  return false;
}

// Golden-section maximization over (lo, hi); the target may return -inf
// near the endpoints.
template <class F>
std::pair<double, double> golden_max(const F& f, double lo, double hi,
                                     double tol) {
  constexpr double phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

struct LaplaceFit1d {
  double mode = 0.0;
  double value = 0.0;      // log target at the mode
  double curvature = 0.0;  // second derivative at the mode
  bool concave = false;
};

// Mode by golden section, curvature by central finite difference. The
// Gaussian approximation is N(mode, -1/curvature) when concave.
template <class F>
LaplaceFit1d laplace_fit_1d(const F& logtarget, double lo, double hi,
                            double tol, double fd_step) {
  LaplaceFit1d fit;
  const auto [mode, value] = golden_max(logtarget, lo, hi, tol);
  fit.mode = mode;
  fit.value = value;
  fit.curvature = (logtarget(mode + fd_step) - 2.0 * value +
                   logtarget(mode - fd_step)) /
                  (fd_step * fd_step);
  fit.concave = std::isfinite(fit.curvature) && fit.curvature < 0.0;
  return fit;
}

// Robbins-Monro step-size adaptation toward a target acceptance rate; used
// only during burn-in so the retained chain has a fixed kernel.
class ScaleAdapter {
 public:
  explicit ScaleAdapter(double target_acceptance = 0.35)
      : target_(target_acceptance) {}

  void update(bool accepted) {
    ++t_;
    const double gamma = 1.5 / std::pow(static_cast<double>(t_) + 10.0, 0.7);
    log_factor_ += gamma * ((accepted ? 1.0 : 0.0) - target_);
    log_factor_ = std::clamp(log_factor_, -8.0, 8.0);
  }

  double factor() const { return std::exp(log_factor_); }

 private:
  double target_;
  double log_factor_ = 0.0;
  long long t_ = 0;
};

}  // namespace mosaic
