#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mosaic {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// Conditional density of the observed count given its latent Gaussian
// coordinate. PoissonLogNormal: y ~ Poisson(e^x). RoundedGaussian:
// y = ceil(x) for x > 0, y = 0 for x <= 0.
enum class LinkFamily { PoissonLogNormal, RoundedGaussian };

std::string to_string(LinkFamily link);
LinkFamily link_from_string(const std::string& name);

struct ModelSpec {
  int p = 0;
  std::vector<LinkFamily> links;  // one per dimension

  void validate() const;  // throws std::invalid_argument on malformed spec
};

// Mean vector and symmetric covariance. sigma is symmetric by storage;
// raw mosaic draws may assemble into an indefinite sigma (that is what the
// PSD correction is for), so positive definiteness is not enforced here.
struct Parameters {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;

  int p() const { return static_cast<int>(mu.size()); }
};

// One univariate marginal's parameters (mu_j, sigma_jj).
struct KnotParam {
  double mu = 0.0;
  double var = 1.0;  // sigma_jj > 0
};

// One covariance entry sigma_st, 0 <= s < t < p.
struct TileParam {
  int s = 0;
  int t = 1;
  double cov = 0.0;
};

// Row-major ordering of pairs (s,t), s < t: (0,1),(0,2),...,(p-2,p-1).
int pair_count(int p);
int pair_index(int s, int t, int p);
std::pair<int, int> pair_from_index(int k, int p);

using Hist1 = std::vector<std::pair<std::int64_t, std::int64_t>>;  // value -> count
using Hist2 =
    std::vector<std::pair<std::pair<std::int64_t, std::int64_t>, std::int64_t>>;

// Per-dimension and per-pair count histograms; the K-cardinality sufficient
// statistics that the samplers work from. Immutable after construction and
// safe to share across chains.
struct CompressedDataset {
  std::int64_t n = 0;
  int p = 0;
  std::vector<Hist1> uni;  // length p, sorted by value
  std::vector<Hist2> biv;  // length p(p-1)/2 in row-major pair order, sorted
};

// Builds histograms in one pass over the raw matrix. Rejects negative
// entries, reporting the offending row and column.
CompressedDataset compress(const IntMatrix& raw);

Hist2 transpose_hist(const Hist2& hist);

std::pair<std::vector<KnotParam>, std::vector<TileParam>> split_parameters(
    const Parameters& theta);

Parameters assemble_parameters(const std::vector<KnotParam>& knots,
                               const std::vector<TileParam>& tiles);

}  // namespace mosaic
