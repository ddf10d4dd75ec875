#include "volmat/benchmark.hpp"

#include <cmath>
#include <set>

#include "volmat/estimators.hpp"
#include "volmat/parallel.hpp"

namespace volmat {

namespace {

std::string label_real(const std::string& key, double value) {
  return key + "=" + format_real(value);
}

}  // namespace

EstimatorFamily single_estimator(std::string name,
                                 std::function<VolMatrix(const PricePanel&)> estimator) {
  EstimatorFamily family;
  family.name = std::move(name);
  family.candidates = {"default"};
  family.evaluate = [estimator = std::move(estimator)](const PricePanel& panel) {
    return std::vector<Matrix>{estimator(panel).matrix()};
  };
  return family;
}

namespace {

// Rounded powers of `ratio` in [1, limit], deduplicated.
std::vector<int> geometric_ints(double ratio, int limit) {
  std::set<int> values;
  for (int k = 0;; ++k) {
    const int v = static_cast<int>(std::lround(std::pow(ratio, k)));
    if (v > limit) break;
    values.insert(v);
  }
  return {values.begin(), values.end()};
}

}  // namespace

TuningSpec TuningSpec::defaults(int n) {
  TuningSpec spec;
  spec.hbar_grid.push_back(0.0);
  for (int k = 0; k < 18; ++k) spec.hbar_grid.push_back(0.05 * std::pow(1.4, k));
  spec.arvm_gaps = geometric_ints(1.4, n / 2);
  for (int N : geometric_ints(1.4, n / 4)) {
    if (N >= 2) spec.msrvm_scales.push_back(N);
  }
  return spec;
}

std::string TuningSpec::canonical_text() const {
  std::string out = "hbar_grid = ";
  for (std::size_t i = 0; i < hbar_grid.size(); ++i) {
    if (i) out += ',';
    out += format_real(hbar_grid[i]);
  }
  out += "\narvm_gaps = ";
  for (std::size_t i = 0; i < arvm_gaps.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(arvm_gaps[i]);
  }
  out += "\nmsrvm_scales = ";
  for (std::size_t i = 0; i < msrvm_scales.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(msrvm_scales[i]);
  }
  out += "\nscale_constant = " + format_real(scale_constant);
  out += std::string("\nthreshold_diagonal = ") + (threshold_diagonal ? "true" : "false") + "\n";
  return out;
}

std::vector<EstimatorFamily> standard_families(int n, int p, const TuningSpec& spec) {
  if (spec.hbar_grid.empty() || spec.arvm_gaps.empty()) {
    throw Error(Errc::empty_grid, "tuning grids must be nonempty");
  }
  for (double h : spec.hbar_grid) {
    if (!(h >= 0.0) || !std::isfinite(h)) {
      throw Error(Errc::invalid_argument, "hbar grid values must be finite and >= 0");
    }
  }
  std::vector<ScaleWeights> schedules;
  if (spec.msrvm_scales.empty()) {
    schedules.push_back(scale_weights(n, spec.scale_constant));
  } else {
    for (int N : spec.msrvm_scales) schedules.push_back(scale_weights_for(N, n));
  }
  std::vector<ThresholdRule> rules;
  for (double h : spec.hbar_grid) {
    rules.push_back(h == 0.0 ? ThresholdRule::fixed(0.0, spec.threshold_diagonal)
                             : ThresholdRule::from_hbar(h, n, p, spec.threshold_diagonal));
  }
  const std::vector<int> gaps = spec.arvm_gaps;

  std::vector<EstimatorFamily> families;

  EstimatorFamily plain_msrvm{"msrvm", {}, {}};
  for (const auto& w : schedules) plain_msrvm.candidates.push_back("N=" + std::to_string(w.N));
  plain_msrvm.evaluate = [schedules](const PricePanel& panel) {
    std::vector<Matrix> out;
    for (const auto& w : schedules) out.push_back(msrvm(panel, w).matrix());
    return out;
  };
  families.push_back(std::move(plain_msrvm));

  EstimatorFamily plain_arvm{"arvm", {}, {}};
  for (int gap : gaps) plain_arvm.candidates.push_back("K=" + std::to_string(gap));
  plain_arvm.evaluate = [gaps](const PricePanel& panel) {
    std::vector<Matrix> out;
    for (int gap : gaps) out.push_back(arvm(panel, gap).matrix());
    return out;
  };
  families.push_back(std::move(plain_arvm));

  EstimatorFamily thr_msrvm{"thr-msrvm", {}, {}};
  for (const auto& w : schedules) {
    for (double h : spec.hbar_grid) {
      thr_msrvm.candidates.push_back("N=" + std::to_string(w.N) + ";" + label_real("hbar", h));
    }
  }
  thr_msrvm.evaluate = [schedules, rules](const PricePanel& panel) {
    std::vector<Matrix> out;
    for (const auto& w : schedules) {
      const VolMatrix base = msrvm(panel, w);
      for (const auto& rule : rules) out.push_back(threshold(base, rule).matrix());
    }
    return out;
  };
  families.push_back(std::move(thr_msrvm));

  EstimatorFamily thr_arvm{"thr-arvm", {}, {}};
  for (int gap : gaps) {
    for (double h : spec.hbar_grid) {
      thr_arvm.candidates.push_back("K=" + std::to_string(gap) + ";" + label_real("hbar", h));
    }
  }
  thr_arvm.evaluate = [gaps, rules](const PricePanel& panel) {
    std::vector<Matrix> out;
    for (int gap : gaps) {
      const VolMatrix base = arvm(panel, gap);
      for (const auto& rule : rules) out.push_back(threshold(base, rule).matrix());
    }
    return out;
  };
  families.push_back(std::move(thr_arvm));
  return families;
}

std::vector<EstimatorFamily> standard_families(int n, int p, const TuningSpec& spec,
                                               const std::vector<std::string>& names) {
  auto all = standard_families(n, p, spec);
  std::vector<EstimatorFamily> chosen;
  for (const auto& name : names) {
    bool found = false;
    for (const auto& family : all) {
      if (family.name == name) {
        chosen.push_back(family);
        found = true;
      }
    }
    if (!found) throw Error(Errc::invalid_argument, "unknown estimator '" + name + "'");
  }
  return chosen;
}

const BenchmarkRow& BenchmarkReport::row(const std::string& estimator, double theta) const {
  for (const auto& r : rows) {
    if (r.estimator == estimator && r.theta == theta) return r;
  }
  throw Error(Errc::invalid_argument,
              "no row for " + estimator + " at theta " + format_real(theta));
}

std::string BenchmarkReport::to_csv() const {
  std::string out = "estimator,theta,mre_mean,mre_se,reps,seed\n";
  for (const auto& r : rows) {
    out += r.estimator + "," + format_real(r.theta) + "," + format_real(r.mre_mean) + "," +
           format_real(r.mre_se) + "," + std::to_string(r.reps) + "," + std::to_string(r.seed) +
           "\n";
  }
  return out;
}

std::string BenchmarkReport::to_long_csv() const {
  std::string out = "estimator,theta,rep,relative_error,selected,config_digest\n";
  for (const auto& r : rows) {
    for (std::size_t rep = 0; rep < r.errors.size(); ++rep) {
      out += r.estimator + "," + format_real(r.theta) + "," + std::to_string(rep) + "," +
             format_real(r.errors[rep]) + "," + r.selected + "," + r.config_digest + "\n";
    }
  }
  return out;
}

BenchmarkReport run_benchmark(const SimConfig& cfg, std::span<const EstimatorFamily> families,
                              const BenchmarkOptions& options) {
  cfg.validate();
  if (families.empty()) throw Error(Errc::empty_grid, "no estimators to benchmark");
  const std::size_t thetas = cfg.theta_grid.size();
  const auto reps = static_cast<std::size_t>(cfg.reps);

  // errors[rep][family][theta][candidate]
  using Table = std::vector<std::vector<std::vector<double>>>;
  std::vector<Table> errors(reps);

  parallel_for(reps, options.threads, [&](std::size_t rep) {
    const SimInstance inst = simulate_instance(cfg, static_cast<int>(rep));
    const Matrix& truth = inst.truth.matrix();
    const double truth_norm = spectral_norm(truth, options.norm);
    Table table(families.size(), std::vector<std::vector<double>>(thetas));
    for (std::size_t f = 0; f < families.size(); ++f) {
      const auto& family = families[f];
      for (std::size_t t = 0; t < thetas; ++t) {
        try {
          const std::vector<Matrix> estimates = family.evaluate(inst.observed[t]);
          if (estimates.size() != family.candidates.size()) {
            throw Error(Errc::dimension_mismatch, "family returned " +
                                                      std::to_string(estimates.size()) +
                                                      " estimates for " +
                                                      std::to_string(family.candidates.size()) +
                                                      " candidates");
          }
          auto& row = table[f][t];
          row.resize(estimates.size());
          for (std::size_t c = 0; c < estimates.size(); ++c) {
            // Thresholding often maps neighbouring candidates to the same matrix.
            if (c > 0 && estimates[c] == estimates[c - 1]) {
              row[c] = row[c - 1];
            } else {
              row[c] = relative_spectral_error(estimates[c], truth, truth_norm, options.norm);
            }
          }
        } catch (const Error& e) {
          throw Error(e.code(), "estimator " + family.name + ", theta " +
                                    format_real(cfg.theta_grid[t]) + ", rep " +
                                    std::to_string(rep) + ": " + e.what());
        }
      }
    }
    errors[rep] = std::move(table);
  });

  const std::string digest = fnv1a_hex(cfg.canonical_text() + options.digest_extra);
  BenchmarkReport report;
  for (std::size_t f = 0; f < families.size(); ++f) {
    const std::size_t candidates = families[f].candidates.size();
    for (std::size_t t = 0; t < thetas; ++t) {
      std::size_t best = 0;
      double best_mean = 0.0;
      for (std::size_t c = 0; c < candidates; ++c) {
        double sum = 0.0;
        for (std::size_t rep = 0; rep < reps; ++rep) sum += errors[rep][f][t][c];
        const double mean = sum / static_cast<double>(reps);
        if (c == 0 || mean < best_mean) {
          best = c;
          best_mean = mean;
        }
      }
      BenchmarkRow row;
      row.estimator = families[f].name;
      row.theta = cfg.theta_grid[t];
      row.mre_mean = best_mean;
      row.reps = cfg.reps;
      row.seed = cfg.seed;
      row.config_digest = digest;
      row.selected = families[f].candidates[best];
      row.errors.reserve(reps);
      double ss = 0.0;
      for (std::size_t rep = 0; rep < reps; ++rep) {
        const double e = errors[rep][f][t][best];
        row.errors.push_back(e);
        ss += (e - best_mean) * (e - best_mean);
      }
      row.mre_se = reps > 1 ? std::sqrt(ss / static_cast<double>(reps - 1) /
                                        static_cast<double>(reps))
                            : 0.0;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace volmat
