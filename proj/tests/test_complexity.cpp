#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>

#include "mosaic/complexity.hpp"
#include "mosaic/sampler.hpp"

using namespace mosaic;

TEST_CASE("evaluation time scales linearly in K, not in n") {
  const KnotParam knot{1.0, 0.75};
  const ComplexityReport report =
      complexity_probe(LinkFamily::PoissonLogNormal, knot, {16, 64, 256},
                       {100000, 10000000});
  CAPTURE(report.loglog_slope);
  CHECK(report.loglog_slope > 0.8);
  CHECK(report.loglog_slope < 1.2);
  CAPTURE(report.n_scaling_ratio);
  CHECK(report.n_scaling_ratio < 1.5);
  CHECK(report.rows.size() == 5);
}

TEST_CASE("knot chains cost the same on count-scaled histograms") {
  // identical histograms, counts x100: per-iteration chain time within 1.5x
  Hist1 small, large;
  for (std::int64_t v = 0; v < 12; ++v) {
    const std::int64_t c = 200 - 12 * v;
    small.push_back({v, c});
    large.push_back({v, 100 * c});
  }
  PriorConfig prior;
  ChainConfig cfg;
  cfg.iterations = 400;
  cfg.burn_in = 100;
  cfg.seed = 15;
  const auto chain_time = [&](const Hist1& hist) {
    // warm-up run, then median of three
    sample_knot(LinkFamily::PoissonLogNormal, hist, prior, cfg, 0);
    std::vector<double> times;
    for (int trial = 0; trial < 3; ++trial) {
      const auto t0 = std::chrono::steady_clock::now();
      sample_knot(LinkFamily::PoissonLogNormal, hist, prior, cfg, 0);
      times.push_back(std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count());
    }
    std::sort(times.begin(), times.end());
    return times[1];
  };
  const double t_small = chain_time(small);
  const double t_large = chain_time(large);
  CAPTURE(t_small);
  CAPTURE(t_large);
  CHECK(t_large / t_small < 1.5);
  CHECK(t_small / t_large < 1.5);
}

TEST_CASE("observed cardinality satisfies the extreme-value bound") {
  const KBoundCheck check = k_bound_check(10000, 40, 31);
  CAPTURE(check.fraction());
  CHECK(check.total == 40);
  CHECK(check.fraction() >= 0.9);
}
