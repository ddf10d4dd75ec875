#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <optional>

#include "volmat/benchmark.hpp"
#include "volmat/estimators.hpp"
#include "volmat/parallel.hpp"
#include "volmat/simulate.hpp"
#include "volmat/transform.hpp"
#include "volmat/tuning.hpp"

namespace volmat::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct ConfigEntry {
  std::string key;
  std::string value;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// "key = value" per line; '#' starts a comment.
std::vector<ConfigEntry> parse_config(const std::string& text) {
  std::vector<ConfigEntry> entries;
  std::size_t start = 0;
  int line_no = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find('\n', start), text.size());
    std::string line(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::invalid_config, "config line " + std::to_string(line_no) +
                                            ": expected 'key = value'");
    }
    ConfigEntry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
    if (e.key.empty()) {
      throw Error(Errc::invalid_config, "config line " + std::to_string(line_no) + ": empty key");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

bool flag_given(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

std::optional<std::string> config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

std::string strip_brackets(std::string s) {
  if (s == "{}") return {};
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  return s;
}

void log_resolved(const CLI::App& sub, std::ostream& err) {
  err << "# resolved config\n";
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config") continue;
    std::string value;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      for (std::size_t i = 0; i < res.size(); ++i) value += (i ? "," : "") + res[i];
    } else {
      value = strip_brackets(opt->get_default_str());
    }
    if (value.empty()) continue;
    err << name << " = " << value << "\n";
  }
}

void write_text(const fs::path& path, const std::string& text) { write_file_atomic(path, text); }

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string input;
  std::string method;
  std::optional<int> N;
  std::optional<int> K;
  std::optional<double> hbar;
  std::optional<double> varpi;
  bool diag_exempt = false;
  std::string output;
};

int cmd_estimate(const EstimateArgs& a, std::ostream&, std::ostream& err) {
  const auto t0 = Clock::now();
  const PricePanel panel = read_panel_csv(a.input);
  const int n = panel.intervals(), p = panel.assets();
  const bool multi = a.method == "msrvm" || a.method == "thr-msrvm";
  const bool thresholded = a.method.rfind("thr-", 0) == 0;

  if (multi && a.K) throw Error(Errc::invalid_argument, "--K does not apply to " + a.method);
  if (!multi && a.N) throw Error(Errc::invalid_argument, "--N does not apply to " + a.method);
  if (!multi && !a.K) throw Error(Errc::invalid_argument, "--K is required for " + a.method);
  if (!thresholded && (a.hbar || a.varpi)) {
    throw Error(Errc::invalid_argument, "--hbar/--varpi apply only to thresholded methods");
  }
  if (thresholded && !a.hbar && !a.varpi) {
    throw Error(Errc::invalid_argument, "--varpi or --hbar is required for " + a.method);
  }

  std::optional<ThresholdRule> rule;
  if (thresholded) {
    rule = a.varpi ? ThresholdRule::fixed(*a.varpi, !a.diag_exempt)
                   : ThresholdRule::from_hbar(*a.hbar, n, p, !a.diag_exempt);
  }

  VolMatrix est;
  err << "# n = " << n << "\n# p = " << p << "\n";
  if (multi) {
    const ScaleWeights w = a.N ? scale_weights_for(*a.N, n) : scale_weights(n);
    err << "# N = " << w.N << "\n";
    est = rule ? threshold_msrvm(panel, w, *rule) : msrvm(panel, w);
  } else {
    err << "# K = " << *a.K << "\n";
    est = rule ? threshold_arvm(panel, *a.K, *rule) : arvm(panel, *a.K);
  }
  if (rule) err << "# varpi = " << format_real(rule->varpi()) << "\n";
  write_matrix_csv(est, a.output);
  err << "# wall_seconds = " << seconds_since(t0) << "\n";
  return 0;
}

// ---------------------------------------------------------------- simulate / benchmark

struct SimArgs {
  int n = 200;
  int p = 100;
  int reps = 200;
  std::optional<std::uint64_t> seed;
  std::vector<double> theta = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
  double ou_rate = 6.0;
  double ou_mean = 0.5;
  double rho_low = 0.47;
  double rho_high = 0.53;
};

void add_sim_options(CLI::App* sub, SimArgs& s) {
  sub->add_option("--n", s.n, "Intervals per panel");
  sub->add_option("--p", s.p, "Assets");
  sub->add_option("--seed", s.seed, "Master seed")->required();
  sub->add_option("--theta", s.theta, "Relative noise levels")->delimiter(',');
  sub->add_option("--ou-rate", s.ou_rate, "Mean reversion rate of log volatility");
  sub->add_option("--ou-mean", s.ou_mean, "Long-run mean of log volatility");
  sub->add_option("--rho-low", s.rho_low, "Lower bound of the correlation parameter");
  sub->add_option("--rho-high", s.rho_high, "Upper bound of the correlation parameter");
}

SimConfig to_config(const SimArgs& s) {
  SimConfig cfg;
  cfg.n = s.n;
  cfg.p = s.p;
  cfg.reps = s.reps;
  cfg.seed = *s.seed;
  cfg.theta_grid = s.theta;
  cfg.ou_rate = s.ou_rate;
  cfg.ou_mean = s.ou_mean;
  cfg.rho_low = s.rho_low;
  cfg.rho_high = s.rho_high;
  cfg.validate();
  return cfg;
}

struct SimulateArgs {
  SimArgs sim;
  int rep = 0;
  std::string out_dir;
};

int cmd_simulate(const SimulateArgs& a, std::ostream&, std::ostream& err) {
  const auto t0 = Clock::now();
  SimArgs s = a.sim;
  s.reps = 1;
  const SimConfig cfg = to_config(s);
  const SimInstance inst = simulate_instance(cfg, a.rep);
  const fs::path dir(a.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::io_error, "cannot create " + dir.string() + ": " + ec.message());
  write_panel_csv(inst.latent, dir / "latent.csv");
  for (std::size_t k = 0; k < inst.observed.size(); ++k) {
    write_panel_csv(inst.observed[k], dir / ("observed_" + std::to_string(k) + ".csv"));
  }
  write_matrix_csv(inst.truth, dir / "truth.csv");
  write_text(dir / "gamma.csv", format_matrix_csv(inst.gamma_paths));
  err << "# config_digest = " << cfg.digest() << "\n# rho = " << format_real(inst.rho)
      << "\n# wall_seconds = " << seconds_since(t0) << "\n";
  return 0;
}

struct BenchmarkArgs {
  SimArgs sim;
  std::vector<std::string> estimators = {"msrvm", "arvm", "thr-msrvm", "thr-arvm"};
  std::vector<double> hbar_grid;
  std::vector<int> arvm_gaps;
  std::vector<int> msrvm_scales;
  bool diag_exempt = false;
  std::string out;
  std::string long_out;
};

int cmd_benchmark(const BenchmarkArgs& a, std::ostream&, std::ostream& err) {
  const auto t0 = Clock::now();
  const SimConfig cfg = to_config(a.sim);
  TuningSpec spec = TuningSpec::defaults(cfg.n);
  if (!a.hbar_grid.empty()) spec.hbar_grid = a.hbar_grid;
  if (!a.arvm_gaps.empty()) spec.arvm_gaps = a.arvm_gaps;
  if (!a.msrvm_scales.empty()) spec.msrvm_scales = a.msrvm_scales;
  spec.threshold_diagonal = !a.diag_exempt;
  const auto families = standard_families(cfg.n, cfg.p, spec, a.estimators);

  BenchmarkOptions opts;
  opts.threads = thread_count();
  opts.digest_extra = spec.canonical_text();
  const BenchmarkReport report = run_benchmark(cfg, families, opts);
  write_text(a.out, report.to_csv());
  if (!a.long_out.empty()) write_text(a.long_out, report.to_long_csv());
  for (const auto& r : report.rows) {
    err << "# " << r.estimator << " theta=" << format_real(r.theta)
        << " mre=" << format_real(r.mre_mean) << " se=" << format_real(r.mre_se)
        << " selected=" << r.selected << "\n";
  }
  if (!report.rows.empty()) err << "# config_digest = " << report.rows.front().config_digest << "\n";
  err << "# threads = " << opts.threads << "\n# wall_seconds = " << seconds_since(t0) << "\n";
  return 0;
}

// ---------------------------------------------------------------- transform / tune

struct TransformArgs {
  std::string input;
  double kappa = 1.0;
  std::string out;
};

int cmd_transform(const TransformArgs& a, std::ostream&, std::ostream& err) {
  const auto t0 = Clock::now();
  const PricePanel panel = read_panel_csv(a.input);
  const WhitenedPanel w = whiten(panel, a.kappa);
  std::string text = "l,a_l";
  for (const auto& name : panel.asset_names()) text += "," + name;
  text += "\n";
  for (Eigen::Index l = 0; l < w.u.cols(); ++l) {
    text += std::to_string(l + 1) + "," + format_real(w.spectrum.a(l));
    for (Eigen::Index i = 0; i < w.u.rows(); ++i) text += "," + format_real(w.u(i, l));
    text += "\n";
  }
  write_text(a.out, text);
  err << "# n = " << panel.intervals() << "\n# p = " << panel.assets()
      << "\n# wall_seconds = " << seconds_since(t0) << "\n";
  return 0;
}

struct TuneArgs {
  std::string input;
  int L = 5;
  std::vector<int> N_grid;
  std::vector<double> varpi_grid;
  std::string varpi_mode = "absolute";
  bool diag_exempt = false;
  std::string out;
};

int cmd_tune(const TuneArgs& a, std::ostream& out, std::ostream& err) {
  const auto t0 = Clock::now();
  const PricePanel panel = read_panel_csv(a.input);
  TuningGrid grid;
  grid.N_candidates = a.N_grid;
  grid.varpi_candidates = a.varpi_grid;
  grid.mode = a.varpi_mode == "hbar" ? VarpiMode::hbar : VarpiMode::absolute;
  grid.L = a.L;
  grid.apply_to_diagonal = !a.diag_exempt;
  const TuningResult r = rolling_select(panel, grid);

  std::string table = "N,varpi,score\n";
  for (const auto& row : r.table) {
    table += std::to_string(row.N) + "," + format_real(row.varpi) + "," + format_real(row.score) +
             "\n";
  }
  if (a.out.empty()) {
    out << table;
  } else {
    write_text(a.out, table);
  }
  out << "selected N=" << r.N << " varpi=" << format_real(r.varpi) << "\n";
  err << "# n = " << panel.intervals() << "\n# p = " << panel.assets()
      << "\n# wall_seconds = " << seconds_since(t0) << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Realized volatility matrices from noisy high-frequency prices", "volmat"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  EstimateArgs est;
  CLI::App* s_est = app.add_subcommand("estimate", "Estimate the integrated volatility matrix");
  s_est->add_option("--config", "key = value file of flag settings");
  s_est->add_option("--input", est.input, "Price panel CSV")->required();
  s_est->add_option("--method", est.method, "Estimator")
      ->required()
      ->check(CLI::IsMember({"msrvm", "arvm", "thr-msrvm", "thr-arvm"}));
  s_est->add_option("--N", est.N, "Scale count (default floor(sqrt(n)))");
  s_est->add_option("--K", est.K, "ARVM gap");
  auto* o_hbar = s_est->add_option("--hbar", est.hbar, "Threshold multiplier");
  auto* o_varpi = s_est->add_option("--varpi", est.varpi, "Absolute threshold");
  o_hbar->excludes(o_varpi);
  s_est->add_option("--diag-exempt", est.diag_exempt, "Leave the diagonal unthresholded");
  s_est->add_option("--output", est.output, "Matrix CSV to write")->required();

  SimulateArgs sim;
  CLI::App* s_sim = app.add_subcommand("simulate", "Write one simulated instance to a directory");
  s_sim->add_option("--config", "key = value file of flag settings");
  add_sim_options(s_sim, sim.sim);
  s_sim->add_option("--rep", sim.rep, "Replication index");
  s_sim->add_option("--out-dir", sim.out_dir, "Output directory")->required();

  BenchmarkArgs bench;
  CLI::App* s_bench = app.add_subcommand("benchmark", "Monte Carlo accuracy comparison");
  s_bench->add_option("--config", "key = value file of flag settings");
  add_sim_options(s_bench, bench.sim);
  s_bench->add_option("--reps", bench.sim.reps, "Replications");
  s_bench->add_option("--estimators", bench.estimators, "Estimator families")->delimiter(',');
  s_bench->add_option("--hbar-grid", bench.hbar_grid, "Threshold multipliers")->delimiter(',');
  s_bench->add_option("--arvm-gaps", bench.arvm_gaps, "ARVM gap candidates")->delimiter(',');
  s_bench->add_option("--msrvm-scales", bench.msrvm_scales, "Scale-count candidates")
      ->delimiter(',');
  s_bench->add_option("--diag-exempt", bench.diag_exempt, "Leave the diagonal unthresholded");
  s_bench->add_option("--out", bench.out, "Summary report CSV")->required();
  s_bench->add_option("--long-out", bench.long_out, "Per-replication report CSV");

  TransformArgs tr;
  CLI::App* s_tr = app.add_subcommand("transform", "Sine-transform whitening of a panel");
  s_tr->add_option("--config", "key = value file of flag settings");
  s_tr->add_option("--input", tr.input, "Price panel CSV")->required();
  s_tr->add_option("--kappa", tr.kappa, "Noise-to-signal ratio");
  s_tr->add_option("--out", tr.out, "Output CSV")->required();

  TuneArgs tune;
  CLI::App* s_tune = app.add_subcommand("tune", "Rolling selection of N and threshold");
  s_tune->add_option("--config", "key = value file of flag settings");
  s_tune->add_option("--input", tune.input, "Price panel CSV")->required();
  s_tune->add_option("--L", tune.L, "Number of blocks");
  s_tune->add_option("--N-grid", tune.N_grid, "Scale-count candidates")
      ->required()
      ->delimiter(',');
  s_tune->add_option("--varpi-grid", tune.varpi_grid, "Threshold candidates")
      ->required()
      ->delimiter(',');
  s_tune->add_option("--varpi-mode", tune.varpi_mode, "absolute or hbar")
      ->check(CLI::IsMember({"absolute", "hbar"}));
  s_tune->add_option("--diag-exempt", tune.diag_exempt, "Leave the diagonal unthresholded");
  s_tune->add_option("--out", tune.out, "Score table CSV (default standard output)");

  try {
    std::vector<std::string> full = args;
    if (const auto path = config_path(args); path && !args.empty()) {
      CLI::App* sub = nullptr;
      for (CLI::App* s : app.get_subcommands({})) {
        if (s->get_name() == args.front()) sub = s;
      }
      if (sub == nullptr) throw Error(Errc::invalid_argument, "--config needs a subcommand first");
      std::vector<std::string> extra;
      for (const auto& e : parse_config(read_file(*path))) {
        const std::string flag = "--" + e.key;
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        if (opt == nullptr || e.key == "config" || e.key == "help") {
          throw Error(Errc::invalid_config, "unknown config key '" + e.key + "'");
        }
        if (flag_given(args, flag)) continue;
        extra.push_back(flag);
        extra.push_back(e.value);
      }
      full.insert(full.begin() + 1, extra.begin(), extra.end());
    }
    std::reverse(full.begin(), full.end());
    try {
      app.parse(full);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? 0 : 2;
    }

    const CLI::App* chosen = app.get_subcommands().front();
    log_resolved(*chosen, err);
    if (chosen == s_est) return cmd_estimate(est, out, err);
    if (chosen == s_sim) return cmd_simulate(sim, out, err);
    if (chosen == s_bench) return cmd_benchmark(bench, out, err);
    if (chosen == s_tr) return cmd_transform(tr, out, err);
    return cmd_tune(tune, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_numerical(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace volmat::cli
