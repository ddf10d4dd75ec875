#include "volmat/estimators.hpp"

#include <Eigen/Core>

#include <cmath>
#include <string>

namespace volmat {

namespace {

// Lower triangle of sum_r d_r d_r^T over the increment columns of `diffs`.
Matrix gram_lower(const Matrix& diffs) {
  Matrix s = Matrix::Zero(diffs.rows(), diffs.rows());
  if (diffs.cols() > 0) s.selfadjointView<Eigen::Lower>().rankUpdate(diffs);
  return s;
}

void check_grid_in_panel(const PricePanel& panel, const SamplingGrid& grid) {
  if (grid.size() < 2) {
    throw Error(Errc::grid_too_short, "grid with offset " + std::to_string(grid.offset) +
                                          " and gap " + std::to_string(grid.gap) + " has " +
                                          std::to_string(grid.size()) + " points");
  }
  for (int idx : grid.indices) {
    if (idx < 0 || idx > panel.intervals()) {
      throw Error(Errc::index_out_of_panel, "grid index " + std::to_string(idx) +
                                                " outside panel with n = " +
                                                std::to_string(panel.intervals()));
    }
  }
}

// Increment columns of every grid tau^1..tau^K, stacked grid by grid.
Matrix lagged_increments(const PricePanel& panel, int gap) {
  const int n = panel.intervals();
  if (gap < 1) throw Error(Errc::invalid_argument, "gap must be >= 1");
  if (gap > n) {
    throw Error(Errc::gap_too_large, "gap " + std::to_string(gap) + " exceeds n = " +
                                         std::to_string(n));
  }
  // Every grid needs two points: offset K must still reach K + K <= n.
  if (2 * gap > n) {
    throw Error(Errc::grid_too_short, "gap " + std::to_string(gap) +
                                          " leaves a one-point grid for n = " + std::to_string(n));
  }
  const Matrix& y = panel.values();
  Matrix diffs(panel.assets(), n - gap);
  Eigen::Index c = 0;
  for (int k = 1; k <= gap; ++k) {
    for (int idx = k + gap; idx <= n; idx += gap) diffs.col(c++) = y.col(idx) - y.col(idx - gap);
  }
  return diffs;
}

Matrix one_scale_lower(const PricePanel& panel, int gap) {
  Matrix s = gram_lower(lagged_increments(panel, gap));
  s /= static_cast<double>(gap);
  return s;
}

void threshold_in_place(Matrix& m, const ThresholdRule& rule) {
  const double varpi = rule.varpi();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i == j && !rule.apply_to_diagonal()) continue;
      if (std::abs(m(i, j)) < varpi) m(i, j) = 0.0;
    }
  }
}

}  // namespace

ThresholdRule ThresholdRule::from_hbar(double hbar, int n, int p, bool apply_to_diagonal) {
  return ThresholdRule(default_varpi(n, p, hbar), hbar, apply_to_diagonal);
}

ThresholdRule ThresholdRule::fixed(double varpi, bool apply_to_diagonal) {
  if (!(varpi >= 0.0) || !std::isfinite(varpi)) {
    throw Error(Errc::invalid_argument, "threshold must be finite and >= 0");
  }
  return ThresholdRule(varpi, std::nullopt, apply_to_diagonal);
}

SamplingGrid subsample_grid(int n, int gap, int offset) {
  if (gap < 1) throw Error(Errc::invalid_argument, "gap must be >= 1");
  if (gap > n) {
    throw Error(Errc::gap_too_large, "gap " + std::to_string(gap) + " exceeds n = " +
                                         std::to_string(n));
  }
  if (offset < 1 || offset > gap) {
    throw Error(Errc::offset_out_of_range, "offset " + std::to_string(offset) +
                                               " not in [1, " + std::to_string(gap) + "]");
  }
  SamplingGrid grid{offset, gap, {}};
  grid.indices.reserve(static_cast<std::size_t>((n - offset) / gap + 1));
  for (int idx = offset; idx <= n; idx += gap) grid.indices.push_back(idx);
  return grid;
}

VolMatrix grid_estimator(const PricePanel& panel, const SamplingGrid& grid) {
  check_grid_in_panel(panel, grid);
  const Matrix& y = panel.values();
  Matrix diffs(panel.assets(), grid.size() - 1);
  for (int r = 1; r < grid.size(); ++r) {
    diffs.col(r - 1) = y.col(grid.indices[r]) - y.col(grid.indices[r - 1]);
  }
  return VolMatrix::from_lower(gram_lower(diffs));
}

VolMatrix one_scale_estimator(const PricePanel& panel, int gap) {
  return VolMatrix::from_lower(one_scale_lower(panel, gap));
}

ScaleWeights scale_weights_for(int N, int n) {
  if (N < 2 || 4 * N > n) {
    throw Error(Errc::sample_too_small, "scale count N = " + std::to_string(N) +
                                            " needs N >= 2 and 2N <= n/2 (n = " +
                                            std::to_string(n) + ")");
  }
  ScaleWeights w;
  w.N = N;
  w.n = n;
  w.K.resize(N);
  w.a.resize(N);
  const double Nd = N;
  const double denom = Nd * (Nd * Nd - 1.0);
  for (int m = 1; m <= N; ++m) {
    const int K = m + N;
    w.K[m - 1] = K;
    w.a[m - 1] = 12.0 * K * (m - Nd / 2.0 - 0.5) / denom;
  }
  w.zeta = static_cast<double>(w.K.front()) * w.K.back() / (static_cast<double>(n) * (N - 1));
  return w;
}

ScaleWeights scale_weights(int n, double c) {
  if (!(c > 0.0)) throw Error(Errc::invalid_argument, "scale constant c must be positive");
  if (n < 1) throw Error(Errc::sample_too_small, "n must be positive");
  const int N = static_cast<int>(std::floor(c * std::sqrt(static_cast<double>(n))));
  return scale_weights_for(N, n);
}

VolMatrix msrvm(const PricePanel& panel, const ScaleWeights& weights) {
  if (weights.n != panel.intervals()) {
    throw Error(Errc::weights_mismatch, "weights built for n = " + std::to_string(weights.n) +
                                            ", panel has n = " +
                                            std::to_string(panel.intervals()));
  }
  const int p = panel.assets();
  Matrix combined = Matrix::Zero(p, p);
  Matrix first, last;
  for (int m = 0; m < weights.N; ++m) {
    Matrix scale = one_scale_lower(panel, weights.K[m]);
    combined += weights.a[m] * scale;
    if (m == 0) first = scale;
    if (m == weights.N - 1) last = std::move(scale);
  }
  combined += weights.zeta * (first - last);
  return VolMatrix::from_lower(std::move(combined));
}

VolMatrix threshold(const VolMatrix& m, const ThresholdRule& rule) {
  Matrix out = m.matrix();
  threshold_in_place(out, rule);
  return VolMatrix(std::move(out));
}

double default_varpi(int n, int p, double hbar) {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw Error(Errc::non_positive_hbar, "hbar must be positive, got " + format_real(hbar));
  }
  if (n < 2) throw Error(Errc::too_few_times, "threshold rule needs n >= 2");
  if (p < 1) throw Error(Errc::empty_panel, "threshold rule needs p >= 1");
  const double nd = n;
  return hbar * std::pow(nd, -0.25) * std::sqrt(std::log(nd * p));
}

Vector noise_variance(const PricePanel& panel) {
  const int n = panel.intervals();
  const Matrix& y = panel.values();
  Vector eta = Vector::Zero(panel.assets());
  for (int l = 2; l <= n; ++l) eta += (y.col(l) - y.col(l - 1)).cwiseAbs2();
  eta /= 2.0 * n;
  return eta;
}

VolMatrix arvm(const PricePanel& panel, int gap) {
  Matrix s = one_scale_lower(panel, gap);
  const Vector eta = noise_variance(panel);
  const double factor = 2.0 * (panel.intervals() - gap + 1) / gap;
  s.diagonal() -= factor * eta;
  return VolMatrix::from_lower(std::move(s));
}

VolMatrix threshold_msrvm(const PricePanel& panel, const ScaleWeights& weights,
                          const ThresholdRule& rule) {
  return threshold(msrvm(panel, weights), rule);
}

VolMatrix threshold_arvm(const PricePanel& panel, int gap, const ThresholdRule& rule) {
  return threshold(arvm(panel, gap), rule);
}

}  // namespace volmat
