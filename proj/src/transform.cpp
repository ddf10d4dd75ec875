#include "volmat/transform.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace volmat {

namespace {

void check_size(int n) {
  if (n < 1) throw Error(Errc::invalid_argument, "transform size must be >= 1");
  if (n > kMaxDenseSineSize) {
    throw Error(Errc::invalid_argument, "dense sine transform limited to n <= " +
                                            std::to_string(kMaxDenseSineSize));
  }
}

}  // namespace

Vector toeplitz_eigenvalues(int n) {
  if (n < 1) throw Error(Errc::invalid_argument, "transform size must be >= 1");
  Vector phi(n);
  for (int l = 1; l <= n; ++l) {
    const double s = std::sin(std::numbers::pi * l / (2.0 * (n + 1)));
    phi(l - 1) = 4.0 * s * s;
  }
  return phi;
}

Matrix toeplitz_matrix(int n) {
  if (n < 1) throw Error(Errc::invalid_argument, "transform size must be >= 1");
  Matrix t = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    t(i, i) = 2.0;
    if (i + 1 < n) t(i, i + 1) = t(i + 1, i) = -1.0;
  }
  return t;
}

ToeplitzSpectrum toeplitz_spectrum(int n, double kappa) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw Error(Errc::invalid_argument, "kappa must be finite and >= 0");
  }
  ToeplitzSpectrum s;
  s.n = n;
  s.kappa = kappa;
  s.phi = toeplitz_eigenvalues(n);
  s.a = (1.0 + kappa * kappa * n * s.phi.array()).matrix();
  return s;
}

Matrix dst_matrix(int n) {
  check_size(n);
  const double norm = std::sqrt(2.0 / (n + 1));
  Matrix q(n, n);
  for (int l = 1; l <= n; ++l) {
    for (int r = l; r <= n; ++r) {
      // Reduce l r mod 2(n+1) so the sine argument stays in [0, 2 pi).
      const long long k = (static_cast<long long>(l) * r) % (2LL * (n + 1));
      const double value = norm * std::sin(std::numbers::pi * static_cast<double>(k) / (n + 1));
      q(l - 1, r - 1) = value;
      q(r - 1, l - 1) = value;
    }
  }
  return q;
}

WhitenedPanel whiten(const PricePanel& panel, double kappa) {
  const int n = panel.intervals();
  check_size(n);
  WhitenedPanel out;
  out.spectrum = toeplitz_spectrum(n, kappa);
  const Matrix& y = panel.values();
  const Matrix diffs =
      std::sqrt(static_cast<double>(n)) * (y.rightCols(n) - y.leftCols(n));
  out.u = diffs * dst_matrix(n);
  return out;
}

}  // namespace volmat
