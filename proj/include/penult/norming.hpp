#pragma once

#include <string_view>

#include "penult/model.hpp"

namespace penult {

/// Level convention for b_n, recorded in every output.
inline constexpr std::string_view kNormingConvention = "F(b_n) = exp(-1/n)";

struct NormingConstants {
  double log_n = 0.0;
  double b_exact = 0.0;
  double b_asymptotic = 0.0;
  double a_scale = 0.0;
};

struct Location {
  double b_exact = 0.0;
  double b_asymptotic = 0.0;
};

/// b_exact solves F(b) = exp(-e^{-log_n}); b_asymptotic = H^{-1}(log_n).
/// For classical models H = -log(1 - F). Throws Error(invalid_block_size) for
/// log_n <= 0.
Location location(const WeibullTypeModel& model, double log_n);

/// a = 1/k(b).
double scale(const WeibullTypeModel& model, double b);

NormingConstants norming(const WeibullTypeModel& model, double log_n);

}  // namespace penult
