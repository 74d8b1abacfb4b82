#include "penult/slowly_varying.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "penult/error.hpp"

namespace penult {

namespace {

// Signed Stirling numbers of the first kind s(j, m), m = 1..j.
constexpr double kStirling[4][4] = {
    {1, 0, 0, 0},
    {-1, 1, 0, 0},
    {2, -3, 1, 0},
    {-6, 11, -6, 1},
};

void check_order(int order) {
  if (order < 1 || order > 4) {
    throw Error(ErrorCode::invalid_argument, "slowly varying derivative order must be in [1,4]");
  }
}

}  // namespace

bool SlowlyVaryingSpec::has_analytic(int order) const {
  check_order(order);
  return static_cast<bool>(derivatives[order - 1]);
}

// l varies on the scale of log x, so the derivatives are taken of
// G(s) = l(e^s) and mapped back through the Stirling expansion.
double SlowlyVaryingSpec::numeric_derivative(int order, double x) const {
  check_order(order);
  if (!(x > 0.0)) throw Error(ErrorCode::domain_error, "numeric derivative needs x > 0");
  const double s = std::log(x);
  const numerics::RealFn in_log_scale = [this](double v) { return value(std::exp(v)); };
  double acc = 0.0;
  for (int m = 1; m <= order; ++m) {
    acc += kStirling[order - 1][m - 1] * numerics::derivative(in_log_scale, s, m).value;
  }
  return acc / std::pow(x, order);
}

double SlowlyVaryingSpec::derivative(int order, double x) const {
  check_order(order);
  if (derivatives[order - 1]) return derivatives[order - 1](x);
  return numeric_derivative(order, x);
}

SlowlyVaryingSpec from_log_scale(std::string label, double domain_lower, LogScaleJet jet) {
  auto shared = std::make_shared<LogScaleJet>(std::move(jet));
  SlowlyVaryingSpec spec;
  spec.label = std::move(label);
  spec.domain_lower = domain_lower;
  spec.value = [shared](double x) { return (*shared)(std::log(x))[0]; };
  for (int j = 1; j <= 4; ++j) {
    spec.derivatives[j - 1] = [shared, j](double x) {
      const auto g = (*shared)(std::log(x));
      double acc = 0.0;
      for (int m = 1; m <= j; ++m) acc += kStirling[j - 1][m - 1] * g[m];
      return acc / std::pow(x, j);
    };
  }
  return spec;
}

SlowlyVaryingSpec numeric_only(std::string label, double domain_lower, numerics::RealFn value) {
  SlowlyVaryingSpec spec;
  spec.label = std::move(label);
  spec.domain_lower = domain_lower;
  spec.value = std::move(value);
  return spec;
}

namespace sv {

SlowlyVaryingSpec constant(double c) {
  if (!(c > 0.0)) throw Error(ErrorCode::invalid_argument, "constant slowly varying function must be positive");
  SlowlyVaryingSpec spec;
  spec.label = "constant(" + std::to_string(c) + ")";
  spec.domain_lower = 0.0;
  spec.value = [c](double) { return c; };
  for (auto& d : spec.derivatives) d = [](double) { return 0.0; };
  spec.is_constant = true;
  spec.constant_value = c;
  return spec;
}

SlowlyVaryingSpec log_power(double beta) {
  // G(s) = s^beta, G^{(m)} = (beta)_m s^{beta - m}
  return from_log_scale("log_power(" + std::to_string(beta) + ")", std::exp(1.0), [beta](double s) {
    std::array<double, 5> g{};
    double falling = 1.0;
    for (int m = 0; m < 5; ++m) {
      g[m] = falling * std::pow(s, beta - m);
      falling *= beta - m;
    }
    return g;
  });
}

SlowlyVaryingSpec constant_plus_inverse_log(double c, double d) {
  if (!(c > 0.0)) throw Error(ErrorCode::invalid_argument, "c must be positive");
  // Keep c + d/s >= c/2 on the domain.
  const double lower = std::exp(std::max(1.0, 2.0 * std::abs(d) / c));
  return from_log_scale("const_plus_inv_log(" + std::to_string(c) + "," + std::to_string(d) + ")", lower,
                        [c, d](double s) {
                          std::array<double, 5> g{};
                          g[0] = c + d / s;
                          // d/ds^m s^-1 = (-1)^m m! s^-(m+1)
                          double factor = -1.0;
                          for (int m = 1; m < 5; ++m) {
                            g[m] = d * factor * std::pow(s, -(m + 1));
                            factor *= -(m + 1);
                          }
                          return g;
                        });
}

std::vector<SlowlyVaryingSpec> builtins() {
  return {constant(1.0), log_power(-1.0), log_power(1.0), log_power(2.0), constant_plus_inverse_log(1.0, 1.0)};
}

}  // namespace sv

double sv_ratio(const SlowlyVaryingSpec& spec, int j, double x) {
  check_order(j);
  if (!(x >= spec.domain_lower)) {
    throw Error(ErrorCode::domain_error, "x below the slowly varying function's domain");
  }
  const double l = spec.value(x);
  if (!std::isfinite(l) || !(l > 0.0)) {
    throw Error(ErrorCode::domain_error, "l(x) must be finite and positive");
  }
  return std::pow(x, j) * spec.derivative(j, x) / l;
}

std::string_view to_string(SvVerdict verdict) noexcept {
  return verdict == SvVerdict::decaying ? "decaying" : "not_confirmed";
}

SvConditionReport check_sv_conditions(const SlowlyVaryingSpec& spec, const std::vector<double>& t_grid) {
  if (t_grid.size() < 4 || !std::is_sorted(t_grid.begin(), t_grid.end()) || !(t_grid.front() > 0.0) ||
      t_grid.back() < 1e3 * t_grid.front()) {
    throw Error(ErrorCode::insufficient_grid, "need at least 4 ascending points spanning 3 decades");
  }
  SvConditionReport report;
  report.t_grid = t_grid;
  for (int j = 1; j <= 4; ++j) {
    auto& seq = report.ratios[j - 1];
    seq.reserve(t_grid.size());
    for (double t : t_grid) seq.push_back(sv_ratio(spec, j, t));
    const double first = std::abs(seq.front());
    const double last = std::abs(seq.back());
    report.verdicts[j - 1] = (last <= 0.5 * first && last < 0.1) ? SvVerdict::decaying : SvVerdict::not_confirmed;
  }
  return report;
}

}  // namespace penult
