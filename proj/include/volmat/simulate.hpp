#pragma once

// Synthetic noisy high-frequency panels with stochastic volatility.
//
// Each asset's log instantaneous variance follows dlog g = rate (mean - log g) dt + dW,
// stepped by Euler with dt = 1/n from its stationary law. Cross-asset
// correlation is rho^|i-j| with rho ~ U[rho_low, rho_high] drawn once per
// replication. Prices follow X(t_l) = X(t_{l-1}) + sigma_{t_{l-1}}^T Z_l / sqrt(n)
// with gamma = sigma^T sigma, and the observed panel adds i.i.d.
// N(0, theta^2 Gamma_ii) noise for each requested relative noise level theta.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "volmat/core.hpp"

namespace volmat {

struct SimConfig {
  int n = 200;
  int p = 100;
  std::vector<double> theta_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
  int reps = 200;
  std::uint64_t seed = 0;
  double ou_rate = 6.0;
  double ou_mean = 0.5;
  double rho_low = 0.47;
  double rho_high = 0.53;
  /// When set, volatility is constant: gamma(t) == constant_gamma and the
  /// OU/correlation parameters are unused.
  std::optional<Matrix> constant_gamma;

  void validate() const;
  /// One "key = value" line per field, in a fixed order.
  std::string canonical_text() const;
  /// 16 hex digits of FNV-1a 64 over canonical_text().
  std::string digest() const;
};

struct SimInstance {
  PricePanel latent;
  std::vector<PricePanel> observed;  // one per cfg.theta_grid entry
  VolMatrix truth;
  Matrix gamma_paths;  // p x n, column l holds gamma_ii(t_l), l = 0..n-1
  double rho = 0.0;
};

/// Deterministic in (cfg, rep_index): the same pair yields bit-identical output.
SimInstance simulate_instance(const SimConfig& cfg, int rep_index);

/// Random stream identifiers within a replication.
enum class StreamTag : std::uint32_t {
  correlation = 1,
  volatility = 2,
  diffusion = 3,
  noise = 16,  // + theta index
};

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(const std::string& text);

}  // namespace volmat
