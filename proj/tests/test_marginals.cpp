#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "mosaic/marginals.hpp"
#include "mosaic/rng.hpp"
#include "oracles.hpp"

using namespace mosaic;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
const QuadratureRule knot_rule = gauss_hermite_rule(kDefaultKnotQuadOrder);
const QuadratureRule tile_rule = gauss_hermite_rule(kDefaultTileQuadOrder);
}  // namespace

TEST_CASE("rounded-Gaussian closed-form cells") {
  const KnotParam knot{0.0, 1.0};
  // log Phi(0) = log 0.5
  CHECK(knot_cell_loglik(LinkFamily::RoundedGaussian, 0, knot, knot_rule) ==
        doctest::Approx(-0.69314718055994531).epsilon(1e-14));
  // log(Phi(1) - Phi(0)) frozen from the analytic cell
  CHECK(knot_cell_loglik(LinkFamily::RoundedGaussian, 1, knot, knot_rule) ==
        doctest::Approx(-1.0748623268620714).epsilon(1e-12));
}

TEST_CASE("rounded-Gaussian cells sum to one") {
  for (double mu : {-3.6, 0.4, 4.5}) {
    for (double var : {0.5, 1.25}) {
      const KnotParam knot{mu, var};
      double total = 0.0;
      for (std::int64_t y = 0; y <= 200; ++y)
        total += std::exp(
            knot_cell_loglik(LinkFamily::RoundedGaussian, y, knot, knot_rule));
      CAPTURE(mu);
      CHECK(std::abs(total - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("Poisson-log-normal cells sum to one and match Monte Carlo") {
  SUBCASE("normalization over the support, simulation-regime parameters") {
    for (double mu : {-4.0, -3.5, -3.0}) {
      for (double var : {0.5, 0.75, 1.0}) {
        const KnotParam knot{mu, var};
        double total = 0.0;
        for (std::int64_t y = 0; y <= 200; ++y)
          total += std::exp(knot_cell_loglik(LinkFamily::PoissonLogNormal, y,
                                             knot, knot_rule));
        CAPTURE(mu);
        CAPTURE(var);
        CHECK(std::abs(total - 1.0) < 1e-10);
      }
    }
  }

  SUBCASE("zero cell against the E exp(-e^x) oracle") {
    const KnotParam knot{-4.0, 0.75};
    const auto mc = oracles::pln_knot_cell_mc(0, -4.0, 0.75, 10000000, 91);
    const double got =
        knot_cell_loglik(LinkFamily::PoissonLogNormal, 0, knot, knot_rule);
    CHECK(std::abs(std::exp(got) - mc.mean) < 3.0 * mc.se);
  }
}

TEST_CASE("quadrature order is converged at the shipped default") {
  const QuadratureRule r40 = gauss_hermite_rule(40);
  const QuadratureRule r60 = gauss_hermite_rule(60);
  Rng rng(31);
  Hist1 hist;
  for (std::int64_t y = 0; y <= 6; ++y) hist.push_back({y, 100 - 15 * y});
  for (int trial = 0; trial < 10; ++trial) {
    const KnotParam knot{rng.uniform(-4.0, -3.0), rng.uniform(0.5, 1.0)};
    const double a = knot_loglik(LinkFamily::PoissonLogNormal, knot, hist, r40);
    const double b = knot_loglik(LinkFamily::PoissonLogNormal, knot, hist, r60);
    CHECK(std::abs(a - b) / std::abs(b) <= 1e-8);
  }
}

TEST_CASE("independent tiles factorize into knots") {
  Hist2 hist;
  for (std::int64_t a = 0; a <= 3; ++a)
    for (std::int64_t b = 0; b <= 3; ++b)
      hist.push_back({{a, b}, 1 + a + 2 * b});
  Hist1 hs, ht;
  {
    std::map<std::int64_t, std::int64_t> ms, mt;
    for (const auto& [pair, c] : hist) {
      ms[pair.first] += c;
      mt[pair.second] += c;
    }
    hs.assign(ms.begin(), ms.end());
    ht.assign(mt.begin(), mt.end());
  }

  SUBCASE("same quadrature rule on both routes is exact") {
    const KnotParam ks{-0.8, 0.7};
    const KnotParam kt{-1.1, 1.1};
    const double joint =
        tile_loglik(LinkFamily::PoissonLogNormal, LinkFamily::PoissonLogNormal,
                    {0, 1, 0.0}, ks, kt, hist, tile_rule);
    const double split =
        knot_loglik(LinkFamily::PoissonLogNormal, ks, hs, tile_rule) +
        knot_loglik(LinkFamily::PoissonLogNormal, kt, ht, tile_rule);
    CHECK(joint == doctest::Approx(split).epsilon(1e-12));
  }

  SUBCASE("default rules agree on the simulation-regime parameters") {
    for (LinkFamily link :
         {LinkFamily::PoissonLogNormal, LinkFamily::RoundedGaussian}) {
      const KnotParam ks{link == LinkFamily::RoundedGaussian ? 4.6 : -3.4,
                         0.7};
      const KnotParam kt{link == LinkFamily::RoundedGaussian ? 4.2 : -3.1,
                         1.0};
      const double joint =
          tile_loglik(link, link, {0, 1, 0.0}, ks, kt, hist, tile_rule);
      const double split = knot_loglik(link, ks, hs, knot_rule) +
                           knot_loglik(link, kt, ht, knot_rule);
      CAPTURE(to_string(link));
      CHECK(joint == doctest::Approx(split).epsilon(1e-8));
    }
  }
}

TEST_CASE("rounded-Gaussian pair (0,0) at the identity is the orthant") {
  Hist2 hist = {{{0, 0}, 1}};
  const double got = tile_loglik(LinkFamily::RoundedGaussian,
                                 LinkFamily::RoundedGaussian, {0, 1, 0.0},
                                 {0.0, 1.0}, {0.0, 1.0}, hist, tile_rule);
  CHECK(got == doctest::Approx(std::log(0.25)).epsilon(1e-12));
}

TEST_CASE("Poisson pair cell against the Monte Carlo oracle") {
  const auto mc = oracles::pln_tile_cell_mc(0, 1, -1.0, -1.0, 0.5, 0.5, 0.25,
                                            10000000, 77);
  const double got =
      tile_cell_loglik(LinkFamily::PoissonLogNormal,
                       LinkFamily::PoissonLogNormal, 0, 1, {0, 1, 0.25},
                       {-1.0, 0.5}, {-1.0, 0.5}, tile_rule);
  CHECK(std::abs(std::exp(got) - mc.mean) < 3.0 * mc.se);
}

TEST_CASE("rho-symmetry: transposing histograms swaps the roles") {
  Rng rng(23);
  Hist2 hist;
  for (std::int64_t a = 0; a <= 4; ++a)
    for (std::int64_t b = 0; b <= 2; ++b)
      hist.push_back({{a, b}, 1 + static_cast<std::int64_t>(5 * rng.uniform())});
  const Hist2 transposed = transpose_hist(hist);
  for (LinkFamily link :
       {LinkFamily::PoissonLogNormal, LinkFamily::RoundedGaussian}) {
    const KnotParam ks{link == LinkFamily::RoundedGaussian ? 4.4 : -3.3, 0.8};
    const KnotParam kt{link == LinkFamily::RoundedGaussian ? 4.1 : -3.7, 0.55};
    const double a =
        tile_loglik(link, link, {0, 1, 0.3}, ks, kt, hist, tile_rule);
    const double b =
        tile_loglik(link, link, {0, 1, 0.3}, kt, ks, transposed, tile_rule);
    CAPTURE(to_string(link));
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
  }
}

TEST_CASE("mixed links integrate the rounded coordinate in closed form") {
  // cross-check PLN x RG against brute-force Monte Carlo
  const KnotParam ks{-0.5, 0.6};  // Poisson coordinate
  const KnotParam kt{1.1, 0.9};   // rounded coordinate
  const TileParam tile{0, 1, 0.35};
  Rng rng(41);
  const long long draws = 2000000;
  const double sd_s = std::sqrt(ks.var);
  const double slope = tile.cov / ks.var;
  const double cond_sd = std::sqrt(kt.var - tile.cov * tile.cov / ks.var);
  double sum = 0.0, sumsq = 0.0;
  const std::int64_t ys = 1, yt = 2;
  for (long long i = 0; i < draws; ++i) {
    const double xs = ks.mu + sd_s * rng.normal();
    const double xt = kt.mu + slope * (xs - ks.mu) + cond_sd * rng.normal();
    const std::int64_t ys_draw = rng.poisson(std::exp(xs));
    const std::int64_t yt_draw =
        xt > 0.0 ? static_cast<std::int64_t>(std::ceil(xt)) : 0;
    const double v = (ys_draw == ys && yt_draw == yt) ? 1.0 : 0.0;
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / draws;
  const double se =
      std::sqrt((sumsq / draws - mean * mean) / (draws - 1.0));
  const double got = tile_cell_loglik(LinkFamily::PoissonLogNormal,
                                      LinkFamily::RoundedGaussian, ys, yt,
                                      tile, ks, kt, tile_rule);
  CHECK(std::abs(std::exp(got) - mean) < 3.0 * se);
  // and the swapped order agrees exactly with the swapped arguments
  const double swapped = tile_cell_loglik(LinkFamily::RoundedGaussian,
                                          LinkFamily::PoissonLogNormal, yt, ys,
                                          tile, kt, ks, tile_rule);
  CHECK(got == doctest::Approx(swapped).epsilon(1e-9));
}

TEST_CASE("support violations signal -inf, not a crash") {
  Hist2 hist = {{{0, 0}, 5}};
  const double out =
      tile_loglik(LinkFamily::PoissonLogNormal, LinkFamily::PoissonLogNormal,
                  {0, 1, 1.2}, {0.0, 1.0}, {0.0, 1.0}, hist, tile_rule);
  CHECK(out == -kInf);
}

TEST_CASE("deep underflow in every quadrature cell signals -inf") {
  // rate e^x never reaches y = 400 at mu = -30 with tiny variance
  Hist1 hist = {{400, 1}};
  const double out = knot_loglik(LinkFamily::PoissonLogNormal, {-30.0, 1e-6},
                                 hist, knot_rule);
  CHECK((out == -kInf || out < -700.0));
}
