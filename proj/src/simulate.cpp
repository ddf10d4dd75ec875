#include "volmat/simulate.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <cstdio>

#include "volmat/random.hpp"

namespace volmat {

namespace {

std::uint32_t tag(StreamTag t, std::uint32_t offset = 0) {
  return static_cast<std::uint32_t>(t) + offset;
}

// Lower Cholesky factor L with g = L L^T, i.e. sigma = L^T in the
// gamma = sigma^T sigma convention.
Matrix lower_cholesky(const Matrix& g, int stamp) {
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) {
    throw Error(Errc::cholesky_failure,
                "instantaneous covariance not positive definite at stamp " + std::to_string(stamp));
  }
  return llt.matrixL();
}

std::vector<PricePanel> add_noise(const SimConfig& cfg, int rep_index, const PricePanel& latent,
                                  const VolMatrix& truth) {
  std::vector<PricePanel> observed;
  observed.reserve(cfg.theta_grid.size());
  const int n = cfg.n;
  const int p = cfg.p;
  for (std::size_t t = 0; t < cfg.theta_grid.size(); ++t) {
    const double theta = cfg.theta_grid[t];
    if (theta == 0.0) {
      observed.push_back(latent);
      continue;
    }
    RandomStream rng(cfg.seed, static_cast<std::uint32_t>(rep_index),
                     tag(StreamTag::noise, static_cast<std::uint32_t>(t)));
    Vector sd(p);
    for (int i = 0; i < p; ++i) sd(i) = theta * std::sqrt(truth(i, i));
    Matrix y = latent.values();
    for (int l = 0; l <= n; ++l) {
      for (int i = 0; i < p; ++i) y(i, l) += sd(i) * rng.normal();
    }
    observed.emplace_back(std::move(y), latent.asset_names());
  }
  return observed;
}

}  // namespace

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(h));
  return buffer;
}

void SimConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(Errc::invalid_config, what); };
  if (n < 4) fail("n must be >= 4");
  if (p < 1) fail("p must be >= 1");
  if (reps < 1) fail("reps must be >= 1");
  if (theta_grid.empty()) fail("theta grid is empty");
  for (double theta : theta_grid) {
    if (!(theta >= 0.0) || !std::isfinite(theta)) fail("theta values must be finite and >= 0");
  }
  if (!std::isfinite(ou_rate) || !std::isfinite(ou_mean)) fail("OU parameters must be finite");
  if (!(ou_rate > 0.0)) fail("ou_rate must be > 0");
  if (!(rho_low <= rho_high) || !(rho_high < 1.0) || !(rho_low > -1.0)) {
    fail("need -1 < rho_low <= rho_high < 1");
  }
  if (constant_gamma) {
    if (constant_gamma->rows() != p || constant_gamma->cols() != p) {
      fail("constant_gamma must be p x p");
    }
    if (!constant_gamma->allFinite() || *constant_gamma != constant_gamma->transpose()) {
      fail("constant_gamma must be finite and exactly symmetric");
    }
  }
}

std::string SimConfig::canonical_text() const {
  std::string out;
  auto line = [&out](const std::string& key, const std::string& value) {
    out += key + " = " + value + "\n";
  };
  line("n", std::to_string(n));
  line("p", std::to_string(p));
  line("reps", std::to_string(reps));
  line("seed", std::to_string(seed));
  std::string thetas;
  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    if (i) thetas += ',';
    thetas += format_real(theta_grid[i]);
  }
  line("theta", thetas);
  line("ou_rate", format_real(ou_rate));
  line("ou_mean", format_real(ou_mean));
  line("rho_low", format_real(rho_low));
  line("rho_high", format_real(rho_high));
  if (constant_gamma) {
    std::string g;
    for (Eigen::Index r = 0; r < constant_gamma->rows(); ++r) {
      if (r) g += ';';
      for (Eigen::Index c = 0; c < constant_gamma->cols(); ++c) {
        if (c) g += ',';
        g += format_real((*constant_gamma)(r, c));
      }
    }
    line("constant_gamma", g);
  }
  return out;
}

std::string SimConfig::digest() const { return fnv1a_hex(canonical_text()); }

SimInstance simulate_instance(const SimConfig& cfg, int rep_index) {
  cfg.validate();
  if (rep_index < 0) throw Error(Errc::invalid_argument, "rep_index must be >= 0");
  const int n = cfg.n;
  const int p = cfg.p;
  const auto rep = static_cast<std::uint32_t>(rep_index);
  const double dt = 1.0 / n;
  const double sqrt_dt = std::sqrt(dt);

  // sqrt of the instantaneous variances at t_0..t_{n-1}, one column per stamp.
  Matrix root_gamma(p, n);
  Matrix factor;  // lower Cholesky factor of the correlation (or of constant_gamma)
  double rho = 0.0;

  if (cfg.constant_gamma) {
    factor = lower_cholesky(*cfg.constant_gamma, 0);
    root_gamma.setOnes();
  } else {
    RandomStream corr_rng(cfg.seed, rep, tag(StreamTag::correlation));
    rho = corr_rng.uniform(cfg.rho_low, cfg.rho_high);
    Matrix correlation(p, p);
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < p; ++j) correlation(i, j) = std::pow(rho, std::abs(i - j));
    }
    factor = lower_cholesky(correlation, 0);

    // Stationary law of the log-OU: N(mean, 1 / (2 rate)) for unit diffusion.
    RandomStream vol_rng(cfg.seed, rep, tag(StreamTag::volatility));
    const double stationary_sd = std::sqrt(0.5 / cfg.ou_rate);
    for (int i = 0; i < p; ++i) {
      double log_g = cfg.ou_mean + stationary_sd * vol_rng.normal();
      root_gamma(i, 0) = std::exp(0.5 * log_g);
      for (int l = 1; l < n; ++l) {
        log_g += cfg.ou_rate * (cfg.ou_mean - log_g) * dt + sqrt_dt * vol_rng.normal();
        root_gamma(i, l) = std::exp(0.5 * log_g);
      }
    }
  }

  // gamma(t_l) = D_l C D_l with D_l = diag(root_gamma(:, l)), so its lower
  // Cholesky factor is D_l L_C and sigma_{t_l}^T Z = D_l (L_C Z).
  RandomStream diff_rng(cfg.seed, rep, tag(StreamTag::diffusion));
  Matrix x(p, n + 1);
  x.col(0).setZero();
  Vector z(p);
  for (int l = 1; l <= n; ++l) {
    for (int i = 0; i < p; ++i) z(i) = diff_rng.normal();
    const Vector shock = factor.triangularView<Eigen::Lower>() * z;
    x.col(l) = x.col(l - 1) + sqrt_dt * root_gamma.col(l - 1).cwiseProduct(shock);
  }

  Matrix truth;
  if (cfg.constant_gamma) {
    truth = *cfg.constant_gamma;
  } else {
    Matrix outer = Matrix::Zero(p, p);
    outer.selfadjointView<Eigen::Lower>().rankUpdate(root_gamma, dt);
    truth = Matrix::Zero(p, p);
    for (int j = 0; j < p; ++j) {
      for (int i = j; i < p; ++i) truth(i, j) = outer(i, j) * std::pow(rho, i - j);
    }
    truth.triangularView<Eigen::StrictlyUpper>() = truth.transpose();
  }

  SimInstance inst{PricePanel(std::move(x)), {}, VolMatrix(std::move(truth)),
                   root_gamma.cwiseAbs2(), rho};
  inst.observed = add_noise(cfg, rep_index, inst.latent, inst.truth);
  return inst;
}

}  // namespace volmat
