#pragma once

#include "volmat/core.hpp"

namespace volmat {

/// Maximum absolute column sum.
double l1_norm(const Matrix& m);
/// Maximum absolute row sum.
double linf_norm(const Matrix& m);

enum class SpectralMethod {
  power_iteration,
  /// Dense symmetric eigensolver (eigenvalues only). Preferred when the
  /// leading |eigenvalues| are clustered, where power iteration stalls.
  dense_eigen,
};

struct SpectralNormOptions {
  SpectralMethod method = SpectralMethod::power_iteration;
  double tol = 1e-10;
  int max_iter = 100000;
};

/// Largest absolute eigenvalue of a symmetric matrix.
///
/// Runs power iteration on B = A*A (applied as two products with A), whose
/// dominant eigenvalue lambda^2 is unique in magnitude even when A has a
/// +/- lambda pair, and returns sqrt of B's Rayleigh quotient. Starts from the
/// normalized all-ones vector; if an iterate collapses to zero the iteration
/// restarts from the next index-basis vector e_0, e_1, ... Converged when the
/// relative residual ||Bv - mu v|| / mu drops below tol.
///
/// Throws NoConvergence, carrying the last estimate, after max_iter products.
/// Throws not_symmetric unless m is exactly symmetric.
double spectral_norm(const Matrix& m, SpectralNormOptions options = {});
inline double spectral_norm(const VolMatrix& m, SpectralNormOptions options = {}) {
  return spectral_norm(m.matrix(), options);
}

/// ||estimate - truth||_2 / ||truth||_2.
double relative_spectral_error(const VolMatrix& estimate, const VolMatrix& truth,
                               SpectralNormOptions options = {});
/// Same, with a precomputed ||truth||_2.
double relative_spectral_error(const Matrix& estimate, const Matrix& truth, double truth_norm,
                               SpectralNormOptions options = {});

}  // namespace volmat
