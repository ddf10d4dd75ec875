#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "volmat/transform.hpp"

using namespace volmat;

TEST_CASE("toeplitz_eigenvalues") {
  CHECK(toeplitz_eigenvalues(1)(0) == doctest::Approx(2.0).epsilon(1e-15));
  const Vector two = toeplitz_eigenvalues(2);
  CHECK(two(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(two(1) == doctest::Approx(3.0).epsilon(1e-14));
  const Vector three = toeplitz_eigenvalues(3);
  CHECK(three(0) == doctest::Approx(0.5857864376269049).epsilon(1e-13));
  CHECK(three(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(three(2) == doctest::Approx(3.414213562373095).epsilon(1e-13));

  for (int n : {1, 2, 3, 7, 20, 100}) {
    const Vector phi = toeplitz_eigenvalues(n);
    Eigen::SelfAdjointEigenSolver<Matrix> es(toeplitz_matrix(n));
    CHECK((phi - es.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(phi(0) > 0.0);
    CHECK(phi(n - 1) < 4.0);
    for (int l = 1; l < n; ++l) CHECK(phi(l) > phi(l - 1));
  }
}

TEST_CASE("toeplitz_spectrum") {
  const ToeplitzSpectrum s = toeplitz_spectrum(2, 0.5);
  CHECK(s.a(0) == doctest::Approx(1.0 + 0.25 * 2 * 1.0));
  CHECK(s.a(1) == doctest::Approx(1.0 + 0.25 * 2 * 3.0));
  for (double kappa : {0.5, 1.0, 1.5, 2.0}) {
    for (int n : {16, 64, 256, 1024}) {
      const ToeplitzSpectrum sp = toeplitz_spectrum(n, kappa);
      double inv_sq = 0.0;
      for (int l = 0; l < n; ++l) {
        CHECK(sp.a(l) >= 1.0);
        if (l) CHECK(sp.a(l) > sp.a(l - 1));
        inv_sq += 1.0 / (sp.a(l) * sp.a(l));
      }
      CHECK(inv_sq <= std::sqrt(static_cast<double>(n)) / (2.0 * kappa) + 1.0);
    }
  }
}

TEST_CASE("dst_matrix") {
  const Matrix q2 = dst_matrix(2);
  Matrix expected(2, 2);
  expected << 1, 1, 1, -1;
  expected /= std::sqrt(2.0);
  CHECK((q2 - expected).cwiseAbs().maxCoeff() < 1e-15);

  for (int n : {1, 2, 3, 8, 33, 128}) {
    const Matrix q = dst_matrix(n);
    CHECK(q == q.transpose());
    CHECK((q * q.transpose() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
    const Matrix d = q.transpose() * toeplitz_matrix(n) * q;
    const Vector phi = toeplitz_eigenvalues(n);
    Matrix off = d;
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() < 1e-10);
    CHECK((d.diagonal() - phi).cwiseAbs().maxCoeff() < 1e-10);
  }

  const Matrix q8 = dst_matrix(8);
  for (int l = 1; l <= 8; ++l)
    for (int r = 1; r <= 8; ++r)
      CHECK(q8(l - 1, r - 1) ==
            doctest::Approx(std::sqrt(2.0 / 9) * std::sin(l * r * std::numbers::pi / 9)));
}

TEST_CASE("whiten") {
  SUBCASE("zero panel") {
    const WhitenedPanel w = whiten(PricePanel(Matrix::Zero(3, 9)), 1.0);
    CHECK(w.u == Matrix::Zero(3, 8));
    CHECK(w.spectrum.a.size() == 8);
  }
  SUBCASE("linear") {
    RandomStream rng(4, 0, 0);
    const Matrix y1 = oracle::random_matrix(rng, 3, 17);
    const Matrix y2 = oracle::random_matrix(rng, 3, 17);
    const Matrix combo = whiten(PricePanel(1.5 * y1 - 0.25 * y2), 1.0).u;
    const Matrix parts = 1.5 * whiten(PricePanel(y1), 1.0).u - 0.25 * whiten(PricePanel(y2), 1.0).u;
    CHECK((combo - parts).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("matches the defining product") {
    RandomStream rng(5, 0, 0);
    const Matrix y = oracle::random_matrix(rng, 2, 6);
    const WhitenedPanel w = whiten(PricePanel(y), 0.3);
    const Matrix q = dst_matrix(5);
    for (int i = 0; i < 2; ++i) {
      for (int l = 0; l < 5; ++l) {
        double s = 0.0;
        for (int r = 0; r < 5; ++r) s += std::sqrt(5.0) * (y(i, r + 1) - y(i, r)) * q(r, l);
        CHECK(w.u(i, l) == doctest::Approx(s).epsilon(1e-13));
      }
    }
  }
  SUBCASE("pure noise has variance n kappa^2 phi_l") {
    const int n = 8, reps = 20000;
    const double kappa = 0.7;
    Vector sum_sq = Vector::Zero(n);
    for (int r = 0; r < reps; ++r) {
      RandomStream rng(6, static_cast<std::uint32_t>(r), 0);
      Matrix y(1, n + 1);
      for (int l = 0; l <= n; ++l) y(0, l) = kappa * rng.normal();
      sum_sq += whiten(PricePanel(y), kappa).u.row(0).transpose().cwiseAbs2();
    }
    const Vector phi = toeplitz_eigenvalues(n);
    for (int l = 0; l < n; ++l) {
      const double target = n * kappa * kappa * phi(l);
      CHECK(std::abs(sum_sq(l) / reps - target) <= 0.05 * target);
    }
  }
  SUBCASE("constant-volatility Brownian panel has covariance Gamma") {
    const int n = 8, reps = 20000;
    Matrix sigma(2, 2);  // gamma = sigma^T sigma
    sigma << 1.0, 0.5, 0.0, 0.8;
    const Matrix gamma = sigma.transpose() * sigma;
    std::vector<Matrix> acc(n, Matrix::Zero(2, 2));
    for (int r = 0; r < reps; ++r) {
      RandomStream rng(7, static_cast<std::uint32_t>(r), 0);
      Matrix y = Matrix::Zero(2, n + 1);
      for (int l = 1; l <= n; ++l) {
        Vector z(2);
        z << rng.normal(), rng.normal();
        y.col(l) = y.col(l - 1) + sigma.transpose() * z / std::sqrt(static_cast<double>(n));
      }
      const Matrix u = whiten(PricePanel(y), 0.0).u;
      for (int l = 0; l < n; ++l) acc[l] += u.col(l) * u.col(l).transpose();
    }
    for (int l = 0; l < n; ++l) {
      const Matrix cov = acc[l] / reps;
      CHECK(std::abs(cov(0, 0) - gamma(0, 0)) <= 0.05 * gamma(0, 0));
      CHECK(std::abs(cov(1, 1) - gamma(1, 1)) <= 0.05 * gamma(1, 1));
      CHECK(std::abs(cov(0, 1) - gamma(0, 1)) <= 0.05 * std::sqrt(gamma(0, 0) * gamma(1, 1)));
    }
  }
}
