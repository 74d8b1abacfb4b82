#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace penult {

/// Machine-readable failure categories. The string form (to_string) is what
/// the CLI serializes, so the spellings are part of the output contract.
enum class ErrorCode {
  stencil_failure,
  bracket_miss,
  eval_failure,
  outside_tail_region,
  domain_error,
  insufficient_grid,
  below_support,
  below_range,
  tail_underflow,
  outside_support,
  invalid_block_size,
  theta_one_excluded,
  grid_support_empty,
  degenerate_profile,
  invalid_argument,
  unknown_model,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace penult
