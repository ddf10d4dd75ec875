#pragma once

// Rolling one-period-ahead selection of the scale count N and threshold.
//
// The time axis is cut into L contiguous blocks; each block is treated as its
// own unit-interval panel and estimated with the thresholded multi-scale
// estimator. A candidate (N, varpi) scores sum_k ||G_{k+1} - G_k||_2 and the
// smallest score wins, ties going to the smaller varpi and then the smaller N.

#include <vector>

#include "volmat/core.hpp"
#include "volmat/norms.hpp"

namespace volmat {

enum class VarpiMode {
  absolute,  // candidates are threshold values
  hbar,      // candidates are hbar multipliers, varpi = default_varpi(n_k, p, hbar)
};

struct TuningGrid {
  std::vector<int> N_candidates;
  std::vector<double> varpi_candidates;
  VarpiMode mode = VarpiMode::absolute;
  int L = 5;
  bool apply_to_diagonal = true;
};

struct TuningScore {
  int N = 0;
  double varpi = 0.0;  // candidate value as given (absolute or hbar)
  double score = 0.0;
};

struct TuningResult {
  int N = 0;
  double varpi = 0.0;
  std::vector<TuningScore> table;  // N-major, in grid order
};

/// Block k (0-based) covers intervals [k*m, (k+1)*m] with m = floor(n / L);
/// the last block also takes the remainder.
std::vector<PricePanel> split_blocks(const PricePanel& panel, int L);

TuningResult rolling_select(const PricePanel& panel, const TuningGrid& grid,
                            SpectralNormOptions norm = {SpectralMethod::dense_eigen});

}  // namespace volmat
