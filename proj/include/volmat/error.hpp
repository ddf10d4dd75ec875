#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace volmat {

enum class Errc {
  empty_panel,
  too_few_times,
  non_finite,
  parse_error,
  ragged_rows,
  header_mismatch,
  non_monotone_time,
  io_error,
  not_symmetric,
  dimension_mismatch,
  gap_too_large,
  offset_out_of_range,
  grid_too_short,
  index_out_of_panel,
  sample_too_small,
  weights_mismatch,
  non_positive_hbar,
  invalid_argument,
  invalid_config,
  empty_grid,
  block_too_small,
  zero_truth_norm,
  no_convergence,
  cholesky_failure,
};

std::string_view errc_name(Errc code);

// Numerical failures map to CLI exit code 1, everything else is a
// usage/validation problem (exit code 2).
bool is_numerical(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double best_estimate)
      : Error(Errc::no_convergence, what), best_estimate_(best_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }

 private:
  double best_estimate_;
};

}  // namespace volmat
