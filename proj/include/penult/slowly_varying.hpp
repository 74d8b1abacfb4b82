#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "penult/numerics.hpp"

namespace penult {

/// A slowly varying function l together with its first four derivatives.
/// A derivative slot left empty is synthesized numerically from `value`.
struct SlowlyVaryingSpec {
  std::string label;
  double domain_lower = 1.0;
  numerics::RealFn value;
  std::array<numerics::RealFn, 4> derivatives;
  /// True when l is constant; lets H^{-1} use its closed form.
  bool is_constant = false;
  double constant_value = 1.0;

  bool has_analytic(int order) const;
  /// l^{(order)}(x) from the analytic slot, or numerically when absent.
  double derivative(int order, double x) const;
  double numeric_derivative(int order, double x) const;
};

/// Jet of G(s) = l(e^s): {G, G', G'', G''', G''''} at s = log x.
using LogScaleJet = std::function<std::array<double, 5>(double)>;

/// Builds a spec from the log-scale jet of l. Uses
/// x^j l^{(j)}(x) = sum_m s(j, m) G^{(m)}(log x) with signed Stirling numbers
/// of the first kind, so only derivatives in s = log x are needed.
SlowlyVaryingSpec from_log_scale(std::string label, double domain_lower, LogScaleJet jet);

/// A spec with no analytic derivatives at all.
SlowlyVaryingSpec numeric_only(std::string label, double domain_lower, numerics::RealFn value);

namespace sv {

SlowlyVaryingSpec constant(double c);
/// (log x)^beta on x > e.
SlowlyVaryingSpec log_power(double beta);
/// c + d / log x.
SlowlyVaryingSpec constant_plus_inverse_log(double c, double d);

/// Every catalog entry with default parameters: constant 1, (log x)^beta for
/// beta in {-1, 1, 2}, 1 + 1/log x.
std::vector<SlowlyVaryingSpec> builtins();

}  // namespace sv

/// x^j l^{(j)}(x) / l(x). Throws Error(domain_error) if l(x) is not finite
/// and positive, or x is below the domain.
double sv_ratio(const SlowlyVaryingSpec& spec, int j, double x);

enum class SvVerdict { decaying, not_confirmed };

std::string_view to_string(SvVerdict verdict) noexcept;

struct SvConditionReport {
  std::vector<double> t_grid;
  /// ratios[j-1][i] = sv_ratio(spec, j, t_grid[i])
  std::array<std::vector<double>, 4> ratios;
  std::array<SvVerdict, 4> verdicts{};
};

/// Evaluates the four derivative-decay ratios along t_grid. Verdict is
/// `decaying` when the last magnitude is at most half the first and below 0.1.
/// Requires at least 4 ascending points spanning 3 decades.
SvConditionReport check_sv_conditions(const SlowlyVaryingSpec& spec, const std::vector<double>& t_grid);

}  // namespace penult
