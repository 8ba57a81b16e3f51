#include "mosaic/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace mosaic {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, StreamKind kind,
                          std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = master;
  std::uint64_t h = splitmix64(x);
  x ^= static_cast<std::uint64_t>(kind) * 0xD6E8FEB86659FD93ULL;
  h ^= splitmix64(x);
  x ^= a * 0xA0761D6478BD642FULL + 0x1ULL;
  h ^= splitmix64(x);
  x ^= b * 0xE7037ED1A0B428DBULL + 0x2ULL;
  h ^= splitmix64(x);
  return h;
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& s : state_) s = splitmix64(x);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_pos() {
  double u;
  do {
    u = uniform();
  } while (u <= 0.0);
  return u;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = uniform_pos();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * M_PI * u2;
  cached_normal_ = r * std::sin(t);
  has_cached_normal_ = true;
  return r * std::cos(t);
}

double Rng::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be > 0");
  if (shape < 1.0) {
    // Marsaglia-Tsang boost for shape < 1
    const double u = uniform_pos();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / (3.0 * std::sqrt(d));
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_pos();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::beta(double a, double b) {
  const double ga = gamma(a);
  const double gb = gamma(b);
  return ga / (ga + gb);
}

double Rng::chi_squared(double dof) { return 2.0 * gamma(0.5 * dof); }

long long Rng::poisson(double rate) {
  if (!(rate >= 0.0)) throw std::invalid_argument("poisson: rate must be >= 0");
  long long y = 0;
  // Knuth multiplication in chunks so e^{-rate} never underflows.
  while (rate > 0.0) {
    const double chunk = rate > 500.0 ? 500.0 : rate;
    rate -= chunk;
    const double limit = std::exp(-chunk);
    double prod = uniform_pos();
    while (prod > limit) {
      ++y;
      prod *= uniform_pos();
    }
  }
  return y;
}

}  // namespace mosaic
