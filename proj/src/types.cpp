#include "mosaic/types.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace mosaic {

std::string to_string(LinkFamily link) {
  switch (link) {
    case LinkFamily::PoissonLogNormal:
      return "poisson_log_normal";
    case LinkFamily::RoundedGaussian:
      return "rounded_gaussian";
  }
  throw std::logic_error("unknown link family");
}

LinkFamily link_from_string(const std::string& name) {
  if (name == "poisson_log_normal" || name == "pln")
    return LinkFamily::PoissonLogNormal;
  if (name == "rounded_gaussian" || name == "rg")
    return LinkFamily::RoundedGaussian;
  throw std::invalid_argument("unknown link family: " + name);
}

void ModelSpec::validate() const {
  if (p < 1) throw std::invalid_argument("ModelSpec: p must be >= 1");
  if (static_cast<int>(links.size()) != p)
    throw std::invalid_argument("ModelSpec: links must have exactly p entries");
}

int pair_count(int p) { return p * (p - 1) / 2; }

int pair_index(int s, int t, int p) {
  if (!(0 <= s && s < t && t < p))
    throw std::invalid_argument("pair_index: need 0 <= s < t < p");
  // row-major: all pairs (0,*) first, then (1,*), ...
  return s * p - s * (s + 1) / 2 + (t - s - 1);
}

std::pair<int, int> pair_from_index(int k, int p) {
  if (k < 0 || k >= pair_count(p))
    throw std::invalid_argument("pair_from_index: index out of range");
  int s = 0;
  while (k >= p - s - 1) {
    k -= p - s - 1;
    ++s;
  }
  return {s, s + 1 + k};
}

CompressedDataset compress(const IntMatrix& raw) {
  const auto n = raw.rows();
  const int p = static_cast<int>(raw.cols());
  if (n < 1 || p < 1) throw std::invalid_argument("compress: empty input");
  for (Eigen::Index i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j)
      if (raw(i, j) < 0)
        throw std::invalid_argument("compress: negative entry at row " +
                                    std::to_string(i) + ", column " +
                                    std::to_string(j));

  std::vector<std::map<std::int64_t, std::int64_t>> uni(p);
  std::vector<std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t>>
      biv(pair_count(p));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) ++uni[j][raw(i, j)];
    for (int s = 0; s < p; ++s)
      for (int t = s + 1; t < p; ++t)
        ++biv[pair_index(s, t, p)][{raw(i, s), raw(i, t)}];
  }

  CompressedDataset out;
  out.n = n;
  out.p = p;
  out.uni.reserve(p);
  for (auto& m : uni) out.uni.emplace_back(m.begin(), m.end());
  out.biv.reserve(biv.size());
  for (auto& m : biv) out.biv.emplace_back(m.begin(), m.end());
  return out;
}

Hist2 transpose_hist(const Hist2& hist) {
  Hist2 out;
  out.reserve(hist.size());
  for (const auto& [pair, count] : hist)
    out.push_back({{pair.second, pair.first}, count});
  std::sort(out.begin(), out.end());
  return out;
}

std::pair<std::vector<KnotParam>, std::vector<TileParam>> split_parameters(
    const Parameters& theta) {
  const int p = theta.p();
  if (theta.sigma.rows() != p || theta.sigma.cols() != p)
    throw std::invalid_argument("split_parameters: sigma must be p x p");
  std::vector<KnotParam> knots(p);
  for (int j = 0; j < p; ++j) knots[j] = {theta.mu(j), theta.sigma(j, j)};
  std::vector<TileParam> tiles;
  tiles.reserve(pair_count(p));
  for (int s = 0; s < p; ++s)
    for (int t = s + 1; t < p; ++t)
      tiles.push_back({s, t, theta.sigma(s, t)});
  return {std::move(knots), std::move(tiles)};
}

Parameters assemble_parameters(const std::vector<KnotParam>& knots,
                               const std::vector<TileParam>& tiles) {
  const int p = static_cast<int>(knots.size());
  if (p < 1) throw std::invalid_argument("assemble_parameters: no knots");
  if (static_cast<int>(tiles.size()) != pair_count(p))
    throw std::invalid_argument(
        "assemble_parameters: need p(p-1)/2 tiles for p knots");
  Parameters theta;
  theta.mu.resize(p);
  theta.sigma.setZero(p, p);
  for (int j = 0; j < p; ++j) {
    theta.mu(j) = knots[j].mu;
    theta.sigma(j, j) = knots[j].var;
  }
  std::vector<bool> seen(tiles.size(), false);
  for (const auto& tile : tiles) {
    if (!(0 <= tile.s && tile.s < tile.t && tile.t < p))
      throw std::invalid_argument("assemble_parameters: bad tile indices");
    const int k = pair_index(tile.s, tile.t, p);
    if (seen[k])
      throw std::invalid_argument("assemble_parameters: duplicate tile");
    seen[k] = true;
    theta.sigma(tile.s, tile.t) = tile.cov;
    theta.sigma(tile.t, tile.s) = tile.cov;  // single stored value
  }
  return theta;
}

}  // namespace mosaic
