#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mosaic/marginals.hpp"
#include "mosaic/rng.hpp"
#include "mosaic/types.hpp"

using namespace mosaic;

TEST_CASE("compress counts a single column") {
  IntMatrix raw(5, 1);
  raw << 0, 0, 1, 2, 0;
  const CompressedDataset data = compress(raw);
  REQUIRE(data.n == 5);
  REQUIRE(data.p == 1);
  const Hist1 expected = {{0, 3}, {1, 1}, {2, 1}};
  CHECK(data.uni[0] == expected);
  CHECK(data.biv.empty());
}

TEST_CASE("compress rejects negative entries with location") {
  IntMatrix raw(2, 2);
  raw << 0, 1, 3, -2;
  CHECK_THROWS_WITH_AS(compress(raw),
                       "compress: negative entry at row 1, column 1",
                       std::invalid_argument);
}

TEST_CASE("compress invariants: totals, marginal consistency, pigeonhole") {
  Rng rng(11);
  const int n = 400, p = 3;
  IntMatrix raw(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) raw(i, j) = rng.poisson(1.5 + j);
  const CompressedDataset data = compress(raw);

  for (int j = 0; j < p; ++j) {
    std::int64_t total = 0, lo = raw.col(j).minCoeff(),
                 hi = raw.col(j).maxCoeff();
    for (const auto& [y, c] : data.uni[j]) total += c;
    CHECK(total == n);
    CHECK(static_cast<std::int64_t>(data.uni[j].size()) <= hi - lo + 1);
  }
  for (int s = 0; s < p; ++s) {
    for (int t = s + 1; t < p; ++t) {
      const Hist2& h2 = data.biv[pair_index(s, t, p)];
      std::int64_t total = 0;
      std::map<std::int64_t, std::int64_t> marg_s, marg_t;
      for (const auto& [pair, c] : h2) {
        total += c;
        marg_s[pair.first] += c;
        marg_t[pair.second] += c;
      }
      CHECK(total == n);
      const Hist1 ms(marg_s.begin(), marg_s.end());
      const Hist1 mt(marg_t.begin(), marg_t.end());
      CHECK(ms == data.uni[s]);
      CHECK(mt == data.uni[t]);
    }
  }
}

TEST_CASE("compress is order-invariant") {
  Rng rng(5);
  const int n = 200, p = 2;
  IntMatrix raw(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) raw(i, j) = rng.poisson(2.0);
  IntMatrix permuted = raw;
  // reverse the rows
  for (int i = 0; i < n; ++i) permuted.row(i) = raw.row(n - 1 - i);
  const CompressedDataset a = compress(raw);
  const CompressedDataset b = compress(permuted);
  CHECK(a.uni == b.uni);
  CHECK(a.biv == b.biv);
}

TEST_CASE("pair ordering is row-major") {
  // p = 3: (1,2), (1,3), (2,3) in one-based labels
  CHECK(pair_index(0, 1, 3) == 0);
  CHECK(pair_index(0, 2, 3) == 1);
  CHECK(pair_index(1, 2, 3) == 2);
  CHECK(pair_from_index(0, 3) == std::pair<int, int>{0, 1});
  CHECK(pair_from_index(1, 3) == std::pair<int, int>{0, 2});
  CHECK(pair_from_index(2, 3) == std::pair<int, int>{1, 2});
  for (int p = 1; p <= 6; ++p)
    for (int k = 0; k < pair_count(p); ++k) {
      const auto [s, t] = pair_from_index(k, p);
      CHECK(pair_index(s, t, p) == k);
    }
}

TEST_CASE("split and assemble are exact inverses") {
  SUBCASE("p = 1 has no tiles") {
    Parameters theta;
    theta.mu = Eigen::VectorXd::Constant(1, 2.0);
    theta.sigma = Eigen::MatrixXd::Constant(1, 1, 3.0);
    const auto [knots, tiles] = split_parameters(theta);
    REQUIRE(knots.size() == 1);
    CHECK(knots[0].mu == 2.0);
    CHECK(knots[0].var == 3.0);
    CHECK(tiles.empty());
    const Parameters back = assemble_parameters(knots, tiles);
    CHECK(back.sigma(0, 0) == 3.0);
  }

  SUBCASE("p = 2 reads off the covariance") {
    Parameters theta;
    theta.mu = Eigen::Vector2d(0.0, 1.0);
    theta.sigma.resize(2, 2);
    theta.sigma << 1.0, 0.5, 0.5, 2.0;
    const auto [knots, tiles] = split_parameters(theta);
    REQUIRE(tiles.size() == 1);
    CHECK(tiles[0].s == 0);
    CHECK(tiles[0].t == 1);
    CHECK(tiles[0].cov == 0.5);
  }

  SUBCASE("round-trip on p = 3 random values is exact") {
    Rng rng(42);
    Parameters theta;
    theta.mu.resize(3);
    theta.sigma.resize(3, 3);
    for (int j = 0; j < 3; ++j) {
      theta.mu(j) = rng.normal();
      theta.sigma(j, j) = 1.0 + rng.uniform();
    }
    for (int s = 0; s < 3; ++s)
      for (int t = s + 1; t < 3; ++t) {
        const double v = rng.normal();
        theta.sigma(s, t) = v;
        theta.sigma(t, s) = v;
      }
    const auto [knots, tiles] = split_parameters(theta);
    const Parameters back = assemble_parameters(knots, tiles);
    CHECK(back.mu == theta.mu);
    CHECK(back.sigma == theta.sigma);
    CHECK(back.sigma == back.sigma.transpose().eval());
  }
}

TEST_CASE("assemble rejects duplicate or inconsistent tiles") {
  std::vector<KnotParam> knots = {{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}};
  std::vector<TileParam> tiles = {{0, 1, 0.1}, {0, 2, 0.2}, {0, 1, 0.3}};
  CHECK_THROWS_AS(assemble_parameters(knots, tiles), std::invalid_argument);
  tiles = {{0, 1, 0.1}, {0, 2, 0.2}};
  CHECK_THROWS_AS(assemble_parameters(knots, tiles), std::invalid_argument);
}

TEST_CASE("grouped log-likelihood equals the row-by-row sum") {
  Rng rng(7);
  const int n = 2000;
  IntMatrix raw(n, 1);
  for (int i = 0; i < n; ++i) raw(i, 0) = rng.poisson(0.8);
  const CompressedDataset data = compress(raw);
  const QuadratureRule rule = gauss_hermite_rule(kDefaultKnotQuadOrder);
  const KnotParam knot{-0.3, 0.6};

  const double grouped =
      knot_loglik(LinkFamily::PoissonLogNormal, knot, data.uni[0], rule);
  double rowwise = 0.0;
  for (int i = 0; i < n; ++i)
    rowwise += knot_cell_loglik(LinkFamily::PoissonLogNormal, raw(i, 0), knot,
                                rule);
  CHECK(grouped == doctest::Approx(rowwise).epsilon(1e-9));
}
