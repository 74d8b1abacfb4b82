#include "penult/error.hpp"

namespace penult {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::stencil_failure: return "stencil_failure";
    case ErrorCode::bracket_miss: return "bracket_miss";
    case ErrorCode::eval_failure: return "eval_failure";
    case ErrorCode::outside_tail_region: return "outside_tail_region";
    case ErrorCode::domain_error: return "domain_error";
    case ErrorCode::insufficient_grid: return "insufficient_grid";
    case ErrorCode::below_support: return "below_support";
    case ErrorCode::below_range: return "below_range";
    case ErrorCode::tail_underflow: return "tail_underflow";
    case ErrorCode::outside_support: return "outside_support";
    case ErrorCode::invalid_block_size: return "invalid_block_size";
    case ErrorCode::theta_one_excluded: return "theta_one_excluded";
    case ErrorCode::grid_support_empty: return "grid_support_empty";
    case ErrorCode::degenerate_profile: return "degenerate_profile";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::unknown_model: return "unknown_model";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace penult
