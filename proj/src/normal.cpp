#include "mosaic/normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mosaic {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt1_2 = 0.70710678118654752440;
constexpr double kTwoPi = 6.2831853071795864769;
}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z * kSqrt1_2); }

double normal_sf(double z) { return 0.5 * std::erfc(z * kSqrt1_2); }

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(kTwoPi);
}

double normal_cell(double a, double b) {
  if (!(a < b)) return 0.0;
  if (a == -kInf) return b == kInf ? 1.0 : normal_cdf(b);
  if (b == kInf) return normal_sf(a);
  if (a >= 0.0) return normal_sf(a) - normal_sf(b);
  if (b <= 0.0) return normal_cdf(b) - normal_cdf(a);
  return normal_cdf(b) - normal_cdf(a);
}

namespace {

// Gauss-Legendre abscissae/weights (positive half) used by the Drezner-Genz
// bivariate normal algorithm.
constexpr double kGL6x[3] = {0.9324695142031522, 0.6612093864662647,
                             0.2386191860831970};
constexpr double kGL6w[3] = {0.1713244923791705, 0.3607615730481384,
                             0.4679139345726904};
constexpr double kGL12x[6] = {0.9815606342467191, 0.9041172563704750,
                              0.7699026741943050, 0.5873179542866171,
                              0.3678314989981802, 0.1252334085114692};
constexpr double kGL12w[6] = {0.04717533638651177, 0.1069393259953183,
                              0.1600783285433464,  0.2031674267230659,
                              0.2334925365383547,  0.2491470458134029};
constexpr double kGL20x[10] = {0.9931285991850949,  0.9639719272779138,
                               0.9122344282513259,  0.8391169718222188,
                               0.7463319064601508,  0.6360536807265150,
                               0.5108670019508271,  0.3737060887154196,
                               0.2277858511416451,  0.07652652113349733};
constexpr double kGL20w[10] = {0.01761400713915212, 0.04060142980038694,
                               0.06267204833410906, 0.08327674157670475,
                               0.1019301198172404,  0.1181945319615184,
                               0.1316886384491766,  0.1420961093183821,
                               0.1491729864726037,  0.1527533871307259};

// Upper-quadrant probability P(X > h, Y > k) for standard bivariate normal
// with correlation r; Drezner-Genz hybrid (Genz 2004).
double bvnu(double h, double k, double r) {
  if (h == kInf || k == kInf) return 0.0;
  if (h == -kInf) return k == -kInf ? 1.0 : normal_sf(k);
  if (k == -kInf) return normal_sf(h);
  if (r == 0.0) return normal_sf(h) * normal_sf(k);

  const double* gx;
  const double* gw;
  int ng;
  const double ar = std::abs(r);
  if (ar < 0.3) {
    gx = kGL6x;
    gw = kGL6w;
    ng = 3;
  } else if (ar < 0.75) {
    gx = kGL12x;
    gw = kGL12w;
    ng = 6;
  } else {
    gx = kGL20x;
    gw = kGL20w;
    ng = 10;
  }

  double hk = h * k;
  double bvn = 0.0;
  if (ar < 0.925) {
    const double hs = 0.5 * (h * h + k * k);
    const double asr = std::asin(r);
    for (int i = 0; i < ng; ++i) {
      for (int is = -1; is <= 1; is += 2) {
        const double sn = std::sin(0.5 * asr * (is * gx[i] + 1.0));
        bvn += gw[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      }
    }
    bvn = bvn * asr / (2.0 * kTwoPi) + normal_sf(h) * normal_sf(k);
    return std::clamp(bvn, 0.0, 1.0);
  }

  // |r| >= 0.925: integrate the singular part analytically.
  double kk = k;
  if (r < 0.0) {
    kk = -kk;
    hk = -hk;
  }
  if (ar < 1.0) {
    const double as = (1.0 - r) * (1.0 + r);
    double a = std::sqrt(as);
    const double bs = (h - kk) * (h - kk);
    const double c = 0.125 * (4.0 - hk);
    const double d = 0.0625 * (12.0 - hk);
    double asr = -0.5 * (bs / as + hk);
    if (asr > -100.0)
      bvn = a * std::exp(asr) *
            (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 +
             c * d * as * as / 5.0);
    if (-hk < 100.0) {
      const double b = std::sqrt(bs);
      bvn -= std::exp(-0.5 * hk) * std::sqrt(kTwoPi) * normal_cdf(-b / a) * b *
             (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    a *= 0.5;
    for (int i = 0; i < ng; ++i) {
      for (int is = -1; is <= 1; is += 2) {
        const double xs = a * (is * gx[i] + 1.0) * (a * (is * gx[i] + 1.0));
        const double rs = std::sqrt(1.0 - xs);
        asr = -0.5 * (bs / xs + hk);
        if (asr > -100.0) {
          const double sp = 1.0 + c * xs * (1.0 + d * xs);
          const double ep =
              std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs;
          bvn += a * gw[i] * std::exp(asr) * (ep - sp);
        }
      }
    }
    bvn = -bvn / kTwoPi;
  }
  if (r > 0.0) {
    bvn += normal_sf(std::max(h, kk));
  } else {
    bvn = -bvn;
    if (kk > h) bvn += normal_cdf(kk) - normal_cdf(h);
  }
  return std::clamp(bvn, 0.0, 1.0);
}

inline double bvn_lower(double x, double y, double rho) {
  return bvnu(-x, -y, rho);
}

}  // namespace

double bvn_cdf(double x, double y, double rho) {
  if (!(std::abs(rho) < 1.0))
    throw std::invalid_argument("bvn_cdf: |rho| must be < 1");
  return bvn_lower(x, y, rho);
}

double bvn_rect(const Eigen::Vector2d& lower, const Eigen::Vector2d& upper,
                const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov) {
  const double s1 = std::sqrt(cov(0, 0));
  const double s2 = std::sqrt(cov(1, 1));
  if (!(s1 > 0.0) || !(s2 > 0.0))
    throw std::invalid_argument("bvn_rect: variances must be positive");
  const double rho = cov(0, 1) / (s1 * s2);
  if (!(std::abs(rho) < 1.0 - 1e-12))
    throw std::invalid_argument("bvn_rect: degenerate covariance");
  for (int i = 0; i < 2; ++i)
    if (!(lower(i) < upper(i)))
      throw std::invalid_argument("bvn_rect: need lower < upper");

  const auto z = [&](double v, int i) -> double {
    if (v == kInf || v == -kInf) return v;
    return (v - mean(i)) / (i == 0 ? s1 : s2);
  };
  const double a1 = z(lower(0), 0), b1 = z(upper(0), 0);
  const double a2 = z(lower(1), 1), b2 = z(upper(1), 1);

  const double prob = bvn_lower(b1, b2, rho) - bvn_lower(a1, b2, rho) -
                      bvn_lower(b1, a2, rho) + bvn_lower(a1, a2, rho);
  return std::clamp(prob, 0.0, 1.0);
}

}  // namespace mosaic
