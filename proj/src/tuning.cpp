#include "volmat/tuning.hpp"

#include <string>

#include "volmat/estimators.hpp"

namespace volmat {

std::vector<PricePanel> split_blocks(const PricePanel& panel, int L) {
  if (L < 2) throw Error(Errc::invalid_argument, "need L >= 2 blocks");
  const int n = panel.intervals();
  const int width = n / L;
  if (width < 2) {
    throw Error(Errc::block_too_small, "n = " + std::to_string(n) + " cannot be cut into " +
                                           std::to_string(L) + " blocks");
  }
  std::vector<PricePanel> blocks;
  blocks.reserve(L);
  for (int k = 0; k < L; ++k) {
    const int first = k * width;
    const int count = (k == L - 1) ? n - first : width;
    blocks.push_back(panel.slice(first, count));
  }
  return blocks;
}

TuningResult rolling_select(const PricePanel& panel, const TuningGrid& grid,
                            SpectralNormOptions norm) {
  if (grid.N_candidates.empty() || grid.varpi_candidates.empty()) {
    throw Error(Errc::empty_grid, "tuning grid needs at least one N and one varpi");
  }
  const auto blocks = split_blocks(panel, grid.L);
  const int p = panel.assets();

  for (std::size_t k = 0; k < blocks.size(); ++k) {
    for (int N : grid.N_candidates) {
      const int nk = blocks[k].intervals();
      if (N < 2 || 4 * N > nk) {
        throw Error(Errc::block_too_small, "block " + std::to_string(k + 1) + " has n_k = " +
                                               std::to_string(nk) + ", too small for N = " +
                                               std::to_string(N));
      }
    }
  }

  TuningResult result;
  result.table.reserve(grid.N_candidates.size() * grid.varpi_candidates.size());
  for (int N : grid.N_candidates) {
    std::vector<VolMatrix> raw;
    raw.reserve(blocks.size());
    for (const auto& block : blocks) {
      raw.push_back(msrvm(block, scale_weights_for(N, block.intervals())));
    }
    for (double candidate : grid.varpi_candidates) {
      std::vector<VolMatrix> estimates;
      estimates.reserve(blocks.size());
      for (std::size_t k = 0; k < blocks.size(); ++k) {
        const ThresholdRule rule =
            (grid.mode == VarpiMode::hbar && candidate > 0.0)
                ? ThresholdRule::from_hbar(candidate, blocks[k].intervals(), p,
                                           grid.apply_to_diagonal)
                : ThresholdRule::fixed(candidate, grid.apply_to_diagonal);
        estimates.push_back(threshold(raw[k], rule));
      }
      double score = 0.0;
      for (std::size_t k = 0; k + 1 < estimates.size(); ++k) {
        score += spectral_norm(Matrix(estimates[k + 1].matrix() - estimates[k].matrix()), norm);
      }
      result.table.push_back({N, candidate, score});
    }
  }

  const TuningScore* best = &result.table.front();
  for (const auto& row : result.table) {
    const bool better =
        row.score < best->score ||
        (row.score == best->score &&
         (row.varpi < best->varpi || (row.varpi == best->varpi && row.N < best->N)));
    if (better) best = &row;
  }
  result.N = best->N;
  result.varpi = best->varpi;
  return result;
}

}  // namespace volmat
