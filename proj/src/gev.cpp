#include <cmath>
#include <string>

#include "penult/error.hpp"
#include "penult/model.hpp"

namespace penult {

namespace {

// log(1 + gamma x)/gamma, continuous through gamma = 0.
double reduced_log(double gamma, double x) {
  const double gx = gamma * x;
  if (std::abs(gamma) < 1e-8 && std::abs(gx) < 1e-3) {
    return x * (1.0 - gx / 2.0 + gx * gx / 3.0 - gx * gx * gx / 4.0);
  }
  return std::log1p(gx) / gamma;
}

void require_support(const GevPoint& p) {
  if (!in_gev_support(p)) {
    throw Error(ErrorCode::outside_support,
                "1 + gamma x <= 0 for gamma = " + std::to_string(p.gamma) + ", x = " + std::to_string(p.x));
  }
}

}  // namespace

bool in_gev_support(const GevPoint& p) noexcept {
  return std::isfinite(p.x) && 1.0 + p.gamma * p.x > 0.0;
}

double gev_cdf(const GevPoint& p) {
  require_support(p);
  return std::exp(-std::exp(-reduced_log(p.gamma, p.x)));
}

double gev_density(const GevPoint& p) {
  require_support(p);
  const double t = std::exp(-reduced_log(p.gamma, p.x));
  return std::exp(-t) * t / (1.0 + p.gamma * p.x);
}

}  // namespace penult
