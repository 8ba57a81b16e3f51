#pragma once

#include <cstdint>
#include <vector>

#include "mosaic/types.hpp"

namespace mosaic {

struct ComplexityRow {
  std::string probe;  // "k_scan" or "n_scan"
  std::int64_t K = 0;
  std::int64_t n = 0;
  double seconds_per_eval = 0.0;
};

struct ComplexityReport {
  std::vector<ComplexityRow> rows;
  double loglog_slope = 0.0;   // time vs K, fitted on the k_scan rows
  double n_scaling_ratio = 0.0;  // time(counts x100) / time at fixed K
};

// Times knot_loglik over synthetic histograms of controlled cardinality K
// and count mass n. Counts enter only through the per-cell multipliers, so
// the fixed-K ratio stays near one while time grows linearly in K.
ComplexityReport complexity_probe(LinkFamily link, const KnotParam& knot,
                                  const std::vector<std::int64_t>& K_values,
                                  const std::vector<std::int64_t>& n_values);

struct KBoundCheck {
  int satisfied = 0;
  int total = 0;
  double fraction() const {
    return total > 0 ? static_cast<double>(satisfied) / total : 0.0;
  }
};

// Simulates rounded-Gaussian columns at the balanced-regime truth ranges and
// checks the extreme-value cardinality bound
//   K <= sqrt(sigma) (4 / sqrt(log n) + sqrt(2 log n)) + mu + 2
// per replicate.
KBoundCheck k_bound_check(std::int64_t n, int replicates, std::uint64_t seed);

}  // namespace mosaic
