#pragma once

// Shared domain types: observed price panels, symmetric volatility matrices,
// subsampling grids and multi-scale weights, plus their CSV formats.

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "volmat/error.hpp"

namespace volmat {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// p assets observed at n+1 equally spaced stamps t_l = l/n on [0, 1].
///
/// Column l of values() holds the cross-section at t_l, so values() is
/// assets-by-time. Column 0 is the initial observation; estimators that index
/// from t_1 skip it explicitly.
class PricePanel {
 public:
  explicit PricePanel(Matrix values, std::vector<std::string> asset_names = {});

  int assets() const noexcept { return static_cast<int>(values_.rows()); }
  int intervals() const noexcept { return static_cast<int>(values_.cols()) - 1; }

  const Matrix& values() const noexcept { return values_; }
  double operator()(int asset, int time) const { return values_(asset, time); }
  auto at(int time) const { return values_.col(time); }

  const std::vector<std::string>& asset_names() const noexcept { return names_; }

  /// Panel restricted to stamps [first, first + intervals], re-indexed so that
  /// `first` becomes stamp 0.
  PricePanel slice(int first, int intervals) const;

  friend bool operator==(const PricePanel& a, const PricePanel& b) {
    return a.values_ == b.values_ && a.names_ == b.names_;
  }

 private:
  Matrix values_;
  std::vector<std::string> names_;
};

enum class Orientation { assets_by_time, time_by_assets };

PricePanel validate_panel(const Matrix& raw, Orientation orientation);
PricePanel validate_panel(const PricePanel& panel);

/// Symmetric p x p matrix with entries(i, j) == entries(j, i) bit for bit.
class VolMatrix {
 public:
  VolMatrix() = default;
  /// Throws not_symmetric unless `entries` is exactly symmetric.
  explicit VolMatrix(Matrix entries);

  /// Builds from the lower triangle, mirroring it into the upper one.
  static VolMatrix from_lower(Matrix entries);
  static VolMatrix zero(int p) { return VolMatrix(Matrix::Zero(p, p)); }
  static VolMatrix identity(int p) { return VolMatrix(Matrix::Identity(p, p)); }

  int size() const noexcept { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const noexcept { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

  friend bool operator==(const VolMatrix& a, const VolMatrix& b) {
    return a.entries_ == b.entries_;
  }

 private:
  Matrix entries_;
};

/// tau^k: stamps {k, k+K, k+2K, ...} <= n.
struct SamplingGrid {
  int offset = 1;
  int gap = 1;
  std::vector<int> indices;

  int size() const noexcept { return static_cast<int>(indices.size()); }
};

/// Multi-scale schedule K_m = m + N (m = 1..N), weights a_m and the end-scale
/// correction coefficient zeta, built for sample size n.
struct ScaleWeights {
  int N = 0;
  int n = 0;
  std::vector<int> K;
  std::vector<double> a;
  double zeta = 0.0;
};

// CSV formats.
//
// Panel:  header "time,<asset_1>,...,<asset_p>" ("t" is accepted for "time"),
//         one ascending row per stamp. The time column is only checked for
//         strict monotonicity; arithmetic uses t_l = l / n.
// Matrix: p rows of p comma-separated values, no header, 17 significant digits.

PricePanel parse_panel_csv(const std::string& text);
PricePanel read_panel_csv(const std::filesystem::path& path);
std::string format_panel_csv(const PricePanel& panel);
void write_panel_csv(const PricePanel& panel, const std::filesystem::path& path);

Matrix parse_matrix_csv(const std::string& text);
Matrix read_matrix_csv(const std::filesystem::path& path);
std::string format_matrix_csv(const Matrix& m);
void write_matrix_csv(const VolMatrix& m, const std::filesystem::path& path);

/// 17 significant digits ("%.17g"), exact for 64-bit doubles.
std::string format_real(double value);

/// Writes `contents` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace volmat
