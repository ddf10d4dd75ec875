#pragma once

// Sine-transform whitening of differenced noisy observations.
//
// For i.i.d. N(0, kappa^2) noise the differences of a length-n row have
// covariance kappa^2 * Upsilon with Upsilon = tridiag(-1, 2, -1). The sine
// basis Q diagonalizes Upsilon, so right-multiplying sqrt(n) * (dY_1..dY_n) by
// Q turns the panel into independent vectors U_l ~ N(0, Gamma + (a_l - 1) I)
// with a_l = 1 + kappa^2 n phi_l when volatility is constant.

#include "volmat/core.hpp"

namespace volmat {

inline constexpr int kMaxDenseSineSize = 4096;

struct ToeplitzSpectrum {
  int n = 0;
  double kappa = 0.0;
  Vector phi;  // ascending eigenvalues of Upsilon
  Vector a;    // noise inflation 1 + kappa^2 n phi_l
};

/// phi_l = 4 sin^2(pi l / (2 (n + 1))), l = 1..n.
Vector toeplitz_eigenvalues(int n);
/// Dense tridiag(-1, 2, -1) of size n.
Matrix toeplitz_matrix(int n);
ToeplitzSpectrum toeplitz_spectrum(int n, double kappa);

/// Q(l, r) = sqrt(2 / (n + 1)) sin(l r pi / (n + 1)), 1-based l and r.
Matrix dst_matrix(int n);

struct WhitenedPanel {
  Matrix u;  // p x n, column l-1 is U_l
  ToeplitzSpectrum spectrum;
};

WhitenedPanel whiten(const PricePanel& panel, double kappa);

}  // namespace volmat
