#pragma once

#include <array>
#include <cstdint>

namespace mosaic {

// Stream kinds used to derive independent per-task RNG streams from a
// single master seed. Results become independent of worker count because
// every task owns its own stream.
enum class StreamKind : std::uint64_t {
  Knot = 1,
  Tile = 2,
  TilePlugin = 3,
  Latent = 4,
  Params = 5,
  Simulate = 6,
  Harness = 7,
  Fisher = 8,
};

std::uint64_t derive_seed(std::uint64_t master, StreamKind kind,
                          std::uint64_t a = 0, std::uint64_t b = 0);

// xoshiro256++ with splitmix64 seeding. Self-contained so that draws are
// bit-identical across compilers and across the parallel schedules used by
// the samplers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  double uniform();      // [0, 1)
  double uniform_pos();  // (0, 1)
  double uniform(double lo, double hi);
  double normal();       // standard normal, Box-Muller
  double gamma(double shape);  // unit scale, shape > 0
  double beta(double a, double b);
  double chi_squared(double dof);
  long long poisson(double rate);

 private:
  std::array<std::uint64_t, 4> state_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace mosaic
