#pragma once

// Monte Carlo accuracy benchmark over simulated panels.
//
// An estimator family maps a panel to one estimate per tuning candidate. For
// every (family, theta) the benchmark records the relative spectral error of
// every candidate in every replication, then reports the candidate with the
// smallest mean error. A plain estimator is a family with one candidate.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "volmat/core.hpp"
#include "volmat/norms.hpp"
#include "volmat/simulate.hpp"

namespace volmat {

struct EstimatorFamily {
  std::string name;
  std::vector<std::string> candidates;
  std::function<std::vector<Matrix>(const PricePanel&)> evaluate;
};

EstimatorFamily single_estimator(std::string name,
                                 std::function<VolMatrix(const PricePanel&)> estimator);

/// Tuning grids used by the standard four-estimator comparison.
struct TuningSpec {
  /// hbar multipliers of n^{-1/4} sqrt(log(n p)); 0 means no thresholding.
  std::vector<double> hbar_grid;
  /// Candidate gaps for the ARVM estimators.
  std::vector<int> arvm_gaps;
  /// Candidate scale counts N for the multi-scale estimators; empty means the
  /// single schedule N = floor(scale_constant * sqrt(n)).
  std::vector<int> msrvm_scales;
  double scale_constant = 1.0;
  bool threshold_diagonal = true;

  static TuningSpec defaults(int n);
  std::string canonical_text() const;
};

/// msrvm, arvm, thr-msrvm and thr-arvm over the grids of `spec`.
std::vector<EstimatorFamily> standard_families(int n, int p, const TuningSpec& spec);
/// Subset of standard_families by name; unknown names throw invalid_argument.
std::vector<EstimatorFamily> standard_families(int n, int p, const TuningSpec& spec,
                                               const std::vector<std::string>& names);

struct BenchmarkRow {
  std::string estimator;
  double theta = 0.0;
  double mre_mean = 0.0;
  double mre_se = 0.0;
  int reps = 0;
  std::uint64_t seed = 0;
  std::string config_digest;
  std::string selected;        // winning candidate label
  std::vector<double> errors;  // per replication, selected candidate
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;

  const BenchmarkRow& row(const std::string& estimator, double theta) const;

  /// Header "estimator,theta,mre_mean,mre_se,reps,seed".
  std::string to_csv() const;
  /// Long format, one line per replication:
  /// "estimator,theta,rep,relative_error,selected,config_digest".
  std::string to_long_csv() const;
};

struct BenchmarkOptions {
  int threads = 1;
  SpectralNormOptions norm{SpectralMethod::dense_eigen, 1e-10, 100000};
  /// Extra text mixed into the config digest (e.g. tuning grids).
  std::string digest_extra;
};

BenchmarkReport run_benchmark(const SimConfig& cfg, std::span<const EstimatorFamily> families,
                              const BenchmarkOptions& options = {});

}  // namespace volmat
