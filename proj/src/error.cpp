#include "volmat/error.hpp"

namespace volmat {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::empty_panel: return "EmptyPanel";
    case Errc::too_few_times: return "TooFewTimes";
    case Errc::non_finite: return "NonFinite";
    case Errc::parse_error: return "ParseError";
    case Errc::ragged_rows: return "RaggedRows";
    case Errc::header_mismatch: return "HeaderMismatch";
    case Errc::non_monotone_time: return "NonMonotoneTime";
    case Errc::io_error: return "IoError";
    case Errc::not_symmetric: return "NotSymmetric";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::gap_too_large: return "GapTooLarge";
    case Errc::offset_out_of_range: return "OffsetOutOfRange";
    case Errc::grid_too_short: return "GridTooShort";
    case Errc::index_out_of_panel: return "IndexOutOfPanel";
    case Errc::sample_too_small: return "SampleTooSmall";
    case Errc::weights_mismatch: return "WeightsMismatch";
    case Errc::non_positive_hbar: return "NonPositiveHbar";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::empty_grid: return "EmptyGrid";
    case Errc::block_too_small: return "BlockTooSmall";
    case Errc::zero_truth_norm: return "ZeroTruthNorm";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::cholesky_failure: return "CholeskyFailure";
  }
  return "Unknown";
}

bool is_numerical(Errc code) {
  return code == Errc::no_convergence || code == Errc::cholesky_failure ||
         code == Errc::zero_truth_norm;
}

}  // namespace volmat
