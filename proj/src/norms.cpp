#include "volmat/norms.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace volmat {

double l1_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  double best = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

double linf_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  // Same summation order as l1_norm, so symmetric input gives identical results.
  double best = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

namespace {

double dense_spectral_norm(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NoConvergence("dense symmetric eigensolver failed", 0.0);
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

double spectral_norm(const Matrix& m, SpectralNormOptions options) {
  if (m.rows() != m.cols()) {
    throw Error(Errc::dimension_mismatch, "spectral_norm needs a square matrix");
  }
  if (!(options.tol > 0.0)) throw Error(Errc::invalid_argument, "tol must be positive");
  const Eigen::Index p = m.rows();
  if (p == 0) return 0.0;
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  if (!std::isfinite(scale)) throw Error(Errc::non_finite, "matrix has non-finite entries");
  if (m != m.transpose()) throw Error(Errc::not_symmetric, "spectral_norm needs a symmetric matrix");
  if (options.method == SpectralMethod::dense_eigen) return dense_spectral_norm(m);

  const Matrix a = m / scale;
  const double frob_sq = a.squaredNorm();
  const double collapse = 1e-14 * frob_sq;

  Vector v = Vector::Ones(p) / std::sqrt(static_cast<double>(p));
  Vector w(p), av(p);
  Eigen::Index next_basis = 0;
  double mu = 0.0;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    av.noalias() = a * v;
    w.noalias() = a * av;
    const double wn = w.norm();
    if (wn <= collapse) {
      if (next_basis == p) break;
      v = Vector::Unit(p, next_basis++);
      continue;
    }
    mu = v.dot(w);
    const double residual = (w - mu * v).norm();
    if (residual <= options.tol * mu) return scale * std::sqrt(mu);
    v = w / wn;
  }
  throw NoConvergence("power iteration did not converge in " +
                          std::to_string(options.max_iter) + " iterations",
                      scale * std::sqrt(std::max(mu, 0.0)));
}

double relative_spectral_error(const Matrix& estimate, const Matrix& truth, double truth_norm,
                               SpectralNormOptions options) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols()) {
    throw Error(Errc::dimension_mismatch, "estimate and truth differ in shape");
  }
  if (!(truth_norm > 0.0)) throw Error(Errc::zero_truth_norm, "truth has zero spectral norm");
  return spectral_norm(Matrix(estimate - truth), options) / truth_norm;
}

double relative_spectral_error(const VolMatrix& estimate, const VolMatrix& truth,
                               SpectralNormOptions options) {
  return relative_spectral_error(estimate.matrix(), truth.matrix(),
                                 spectral_norm(truth.matrix(), options), options);
}

}  // namespace volmat
