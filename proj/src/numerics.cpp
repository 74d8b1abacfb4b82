#include "penult/numerics.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "penult/error.hpp"

namespace penult::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Central-difference stencils with O(h^2) leading truncation and even error
// expansions, which is what the Richardson tableau assumes.
double central_stencil(const RealFn& f, double x, int order, double h, double fx) {
  auto eval = [&](double at) {
    double v = f(at);
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::stencil_failure, "non-finite value at x = " + std::to_string(at));
    }
    return v;
  };
  switch (order) {
    case 1:
      return (eval(x + h) - eval(x - h)) / (2.0 * h);
    case 2:
      return (eval(x + h) - 2.0 * fx + eval(x - h)) / (h * h);
    case 3:
      return (eval(x + 2.0 * h) - 2.0 * eval(x + h) + 2.0 * eval(x - h) - eval(x - 2.0 * h)) /
             (2.0 * h * h * h);
    case 4:
      return (eval(x + 2.0 * h) - 4.0 * eval(x + h) + 6.0 * fx - 4.0 * eval(x - h) +
              eval(x - 2.0 * h)) /
             (h * h * h * h);
    default:
      throw Error(ErrorCode::invalid_argument, "derivative order must be in [1,4]");
  }
}

// Sum of absolute stencil weights, times h^order.
double stencil_weight(int order) {
  switch (order) {
    case 1: return 1.0;
    case 2: return 4.0;
    case 3: return 3.0;
    default: return 16.0;
  }
}

// The error estimate is the gap between the last two diagonal entries plus a
// rounding bound for the finest stencil, so that a step whose tableau agrees
// by accident is not preferred over one that is genuinely better conditioned.
Derivative richardson(const RealFn& f, double x, int order, double h, int levels, double fx) {
  double fmax = std::abs(fx);
  RealFn tracked = [&](double at) {
    double v = f(at);
    fmax = std::max(fmax, std::abs(v));
    return v;
  };
  auto rounding = [&](double finest) {
    return 2.0 * kEps * fmax * stencil_weight(order) / std::pow(finest, order);
  };
  if (levels == 1) {
    double coarse = central_stencil(tracked, x, order, h, fx);
    double fine = central_stencil(tracked, x, order, h / 2.0, fx);
    return {coarse, std::abs(coarse - fine) + rounding(h), false};
  }
  std::vector<std::vector<double>> table(levels);
  double step = h;
  double finest = h;
  for (int i = 0; i < levels; ++i, step /= 2.0) {
    finest = step;
    table[i].resize(i + 1);
    table[i][0] = central_stencil(tracked, x, order, step, fx);
    double factor = 1.0;
    for (int m = 1; m <= i; ++m) {
      factor *= 4.0;
      table[i][m] = table[i][m - 1] + (table[i][m - 1] - table[i - 1][m - 1]) / (factor - 1.0);
    }
  }
  double value = table[levels - 1][levels - 1];
  double previous = table[levels - 2][levels - 2];
  return {value, std::abs(value - previous) + rounding(finest), false};
}

// Coefficients of log(phi(u)) = sum_m c_m u^m with phi(u) = -log(1-u)/u.
constexpr int kSeriesTerms = 28;

std::array<double, kSeriesTerms + 1> tail_series_coefficients() {
  std::array<double, kSeriesTerms + 1> a{};
  std::array<double, kSeriesTerms + 1> c{};
  for (int m = 0; m <= kSeriesTerms; ++m) a[m] = 1.0 / (m + 1);
  for (int m = 1; m <= kSeriesTerms; ++m) {
    double acc = m * a[m];
    for (int j = 1; j < m; ++j) acc -= j * c[j] * a[m - j];
    c[m] = acc / m;
  }
  return c;
}

const std::array<double, kSeriesTerms + 1>& series() {
  static const auto coefficients = tail_series_coefficients();
  return coefficients;
}

// Below this hazard level the closed form is used; above it the series in
// u = e^-h converges to machine precision within kSeriesTerms terms.
constexpr double kSeriesThreshold = 3.0;

// {rho, rho', rho'', rho''', rho''''} for h >= kSeriesThreshold.
std::array<double, 5> correction_jet(double h) {
  std::array<double, 5> out{};
  const double u = std::exp(-h);
  if (u == 0.0) return out;
  const auto& c = series();
  double power = 1.0;
  for (int m = 1; m <= kSeriesTerms; ++m) {
    power *= u;
    double term = c[m] * power;
    if (term == 0.0) break;
    double sign_scale = 1.0;
    for (int j = 0; j < 5; ++j) {
      out[j] += term * sign_scale;
      sign_scale *= -static_cast<double>(m);
    }
  }
  return out;
}

}  // namespace

double DiffConfig::default_step_scale(int order) const {
  return std::pow(kEps, 1.0 / (order + 2));
}

void DiffConfig::validate(int order) const {
  if (base_step_scale && !(*base_step_scale > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "base_step_scale must be positive");
  }
  if (richardson_levels < 1) throw Error(ErrorCode::invalid_argument, "richardson_levels must be >= 1");
  if (max_order < 1 || max_order > 4) throw Error(ErrorCode::invalid_argument, "max_order must be in [1,4]");
  if (order < 1 || order > max_order) {
    throw Error(ErrorCode::invalid_argument, "derivative order " + std::to_string(order) + " outside [1, max_order]");
  }
  if (!(min_step_base > 0.0)) throw Error(ErrorCode::invalid_argument, "min_step_base must be positive");
  if (step_search < 0) throw Error(ErrorCode::invalid_argument, "step_search must be >= 0");
}

Derivative derivative(const RealFn& f, double x, int order, const DiffConfig& cfg) {
  cfg.validate(order);
  if (!std::isfinite(x)) throw Error(ErrorCode::stencil_failure, "non-finite abscissa");

  const double base = std::max(std::abs(x), cfg.min_step_base);
  const double reach = order <= 2 ? 1.0 : 2.0;
  double scale = cfg.base_step_scale.value_or(cfg.default_step_scale(order));

  double fx = 0.0;
  if (order % 2 == 0) {
    try {
      fx = f(x);
    } catch (const Error& e) {
      throw Error(ErrorCode::stencil_failure, e.what());
    }
    if (!std::isfinite(fx)) throw Error(ErrorCode::stencil_failure, "non-finite value at centre");
  }

  std::optional<Derivative> best;
  std::string last_failure = "no stencil evaluated";
  for (int attempt = 0; attempt <= cfg.step_search; ++attempt, scale *= 4.0) {
    if (attempt > 0 && reach * scale > cfg.max_relative_reach) break;
    try {
      Derivative d = richardson(f, x, order, scale * base, cfg.richardson_levels, fx);
      if (!std::isfinite(d.value)) continue;
      if (!best || d.error_estimate < best->error_estimate) best = d;
    } catch (const Error& e) {
      last_failure = e.what();
    }
  }
  if (!best) throw Error(ErrorCode::stencil_failure, last_failure);
  best->low_confidence =
      best->error_estimate > cfg.tolerance * std::max(std::abs(best->value), std::numeric_limits<double>::min());
  return *best;
}

double solve_increasing(const RealFn& f, double target, Bracket bracket, double rel_tol) {
  double lo = bracket.lo;
  double hi = bracket.hi;
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::invalid_argument, "bracket must satisfy lo < hi with finite ends");
  }
  auto eval = [&](double at) {
    double v = f(at);
    if (std::isnan(v)) throw Error(ErrorCode::eval_failure, "NaN at x = " + std::to_string(at));
    return v;
  };
  double flo = eval(lo);
  double fhi = eval(hi);
  if (target < flo || target > fhi) {
    throw Error(ErrorCode::bracket_miss, "target " + std::to_string(target) + " outside [" +
                                             std::to_string(flo) + ", " + std::to_string(fhi) + "]");
  }
  const double scale = std::max(1.0, std::abs(target));
  auto converged = [&](double value) { return std::abs(value - target) <= rel_tol * scale; };
  if (converged(flo)) return lo;
  if (converged(fhi)) return hi;

  bool bisect_next = false;
  double last_width = hi - lo;
  for (int iter = 0; iter < 4000; ++iter) {
    double x;
    const bool geometric = lo > 0.0 && hi > 4.0 * lo;
    if (bisect_next || geometric || !std::isfinite(flo) || !std::isfinite(fhi)) {
      x = geometric ? std::sqrt(lo) * std::sqrt(hi) : lo + 0.5 * (hi - lo);
    } else {
      x = lo + (target - flo) * ((hi - lo) / (fhi - flo));
    }
    if (!(x > lo && x < hi)) x = lo + 0.5 * (hi - lo);
    if (!(x > lo && x < hi)) {
      // Adjacent doubles: nothing left to split.
      return std::abs(flo - target) <= std::abs(fhi - target) ? lo : hi;
    }
    double fx = eval(x);
    if (converged(fx)) return x;
    if (fx < target) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    const double width = hi - lo;
    // False position may stall on one side; force a bisection whenever a
    // step fails to halve the bracket.
    bisect_next = !bisect_next && width > 0.5 * last_width;
    last_width = width;
  }
  return std::abs(flo - target) <= std::abs(fhi - target) ? lo : hi;
}

std::array<double, 5> hazard_transform_jet(double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::outside_tail_region, "hazard level must be positive");
  std::array<double, 5> psi{};
  if (h >= kSeriesThreshold) {
    auto rho = correction_jet(h);
    psi[0] = h - rho[0];
    psi[1] = 1.0 - rho[1];
    for (int j = 2; j < 5; ++j) psi[j] = -rho[j];
    return psi;
  }
  // g(h) = -log(1 - e^-h), q = 1/(e^h - 1); g' = -q, q' = -q(1+q).
  const double q = 1.0 / std::expm1(h);
  const double g = -std::log(-std::expm1(-h));
  const double r1 = -q / g;
  const double r2 = q * (1.0 + q) / g;
  const double r3 = -q * (1.0 + q) * (1.0 + 2.0 * q) / g;
  const double r4 = q * (1.0 + q) * (1.0 + 6.0 * q + 6.0 * q * q) / g;
  psi[0] = -std::log(g);
  psi[1] = -r1;
  psi[2] = -(r2 - r1 * r1);
  psi[3] = -(r3 - 3.0 * r1 * r2 + 2.0 * r1 * r1 * r1);
  psi[4] = -(r4 - 4.0 * r1 * r3 - 3.0 * r2 * r2 + 12.0 * r1 * r1 * r2 - 6.0 * r1 * r1 * r1 * r1);
  return psi;
}

double neg_log_neg_log_cdf_from_hazard(double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::outside_tail_region, "hazard level must be positive");
  if (h >= kSeriesThreshold) return h - correction_jet(h)[0];
  return -std::log(-std::log(-std::expm1(-h)));
}

double hazard_tail_correction(double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::outside_tail_region, "hazard level must be positive");
  if (h >= kSeriesThreshold) return correction_jet(h)[0];
  return h + std::log(-std::log(-std::expm1(-h)));
}

double inverse_hazard_transform(double level) {
  return -std::log(-std::expm1(-std::exp(-level)));
}

double log_cdf_power(double log_neg_log_cdf, double log_n) {
  return -std::exp(log_n + log_neg_log_cdf);
}

}  // namespace penult::numerics
