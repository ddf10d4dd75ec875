#pragma once

// Realized-covariance estimators for noisy high-frequency panels:
// subsampled grid estimators, one-scale averages, the multi-scale combination,
// universal thresholding and the noise-adjusted ARVM baseline.

#include <optional>

#include "volmat/core.hpp"

namespace volmat {

/// Universal threshold varpi = hbar * n^{-1/4} * sqrt(log(n p)).
class ThresholdRule {
 public:
  /// Rule derived from hbar for a panel of n intervals and p assets.
  static ThresholdRule from_hbar(double hbar, int n, int p, bool apply_to_diagonal = true);
  /// Rule with an explicit threshold value (varpi >= 0).
  static ThresholdRule fixed(double varpi, bool apply_to_diagonal = true);

  double varpi() const noexcept { return varpi_; }
  /// hbar the threshold was derived from; empty for fixed rules.
  std::optional<double> hbar() const noexcept { return hbar_; }
  bool apply_to_diagonal() const noexcept { return apply_to_diagonal_; }

 private:
  ThresholdRule(double varpi, std::optional<double> hbar, bool diag)
      : varpi_(varpi), hbar_(hbar), apply_to_diagonal_(diag) {}
  double varpi_;
  std::optional<double> hbar_;
  bool apply_to_diagonal_;
};

inline constexpr double kDefaultHbar = 0.5;

SamplingGrid subsample_grid(int n, int gap, int offset);

/// Sum over consecutive grid points of increment outer products.
VolMatrix grid_estimator(const PricePanel& panel, const SamplingGrid& grid);

/// Average of the `gap` grid estimators with offsets 1..gap.
VolMatrix one_scale_estimator(const PricePanel& panel, int gap);

/// Schedule with N = floor(c * sqrt(n)).
ScaleWeights scale_weights(int n, double c = 1.0);
/// Schedule with an explicit scale count N.
ScaleWeights scale_weights_for(int N, int n);

VolMatrix msrvm(const PricePanel& panel, const ScaleWeights& weights);

VolMatrix threshold(const VolMatrix& m, const ThresholdRule& rule);

double default_varpi(int n, int p, double hbar);

/// Per-asset noise variance estimate (1/(2n)) sum_{l=2}^n (dY_l)^2.
Vector noise_variance(const PricePanel& panel);

/// One-scale estimator with the diagonal reduced by 2 (n-K+1)/K times the
/// noise variance estimate.
VolMatrix arvm(const PricePanel& panel, int gap);

VolMatrix threshold_msrvm(const PricePanel& panel, const ScaleWeights& weights,
                          const ThresholdRule& rule);
VolMatrix threshold_arvm(const PricePanel& panel, int gap, const ThresholdRule& rule);

}  // namespace volmat
