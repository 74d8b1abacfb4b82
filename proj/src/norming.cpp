#include "penult/norming.hpp"

#include <cmath>
#include <string>

#include "penult/error.hpp"

namespace penult {

Location location(const WeibullTypeModel& model, double log_n) {
  if (!(log_n > 0.0) || !std::isfinite(log_n)) {
    throw Error(ErrorCode::invalid_block_size, "log_n must be positive and finite, got " + std::to_string(log_n));
  }
  Location loc;
  loc.b_asymptotic = model.cumulative_hazard_inverse(log_n);
  if (model.family() == Family::log_cdf_exp) {
    // -log(-log F) = H exactly
    loc.b_exact = loc.b_asymptotic;
  } else {
    // -log(-log F(b)) = log_n  <=>  H(b) = psi^{-1}(log_n)
    loc.b_exact = model.cumulative_hazard_inverse(numerics::inverse_hazard_transform(log_n));
  }
  return loc;
}

double scale(const WeibullTypeModel& model, double b) { return 1.0 / model.k_function(b); }

NormingConstants norming(const WeibullTypeModel& model, double log_n) {
  const Location loc = location(model, log_n);
  return {log_n, loc.b_exact, loc.b_asymptotic, scale(model, loc.b_exact)};
}

}  // namespace penult
