#pragma once

/**
 * @file numerics.hpp
 * @brief Numerical kernel: finite-difference derivatives with Richardson
 * extrapolation, a safeguarded root finder for increasing functions, and
 * log-space helpers for extreme tail probabilities.
 *
 * The tail helpers revolve around the map
 *
 *     psi(h) = -log(-log(1 - exp(-h)))
 *
 * which turns a cumulative hazard h = -log(1 - F) into -log(-log F). For large
 * h it is written as psi(h) = h - rho(h) with rho(h) = log(phi(e^-h)) and
 * phi(u) = -log(1 - u)/u, so that the exponentially small correction rho and
 * all its derivatives are obtained from a power series in u without
 * cancellation.
 */

#include <array>
#include <functional>
#include <optional>

namespace penult::numerics {

using RealFn = std::function<double(double)>;

/// Settings for derivative(). The stencil step is
/// h = base_step_scale * max(|x|, min_step_base); when base_step_scale is
/// unset the order-dependent default eps^(1/(order+2)) is used.
struct DiffConfig {
  std::optional<double> base_step_scale;
  double min_step_base = 1.0;
  int richardson_levels = 3;
  int max_order = 4;
  /// Relative tolerance on the error estimate; exceeding it sets
  /// Derivative::low_confidence.
  double tolerance = 1e-6;
  /// Number of factor-4 enlargements of the base step that are tried; the
  /// candidate with the smallest extrapolation error estimate wins.
  int step_search = 8;
  /// Upper bound on stencil reach relative to max(|x|, min_step_base).
  double max_relative_reach = 0.5;

  void validate(int order) const;
  double default_step_scale(int order) const;
};

struct Derivative {
  double value = 0.0;
  double error_estimate = 0.0;
  bool low_confidence = false;
};

/// order-th derivative of f at x by central differences and Richardson
/// extrapolation over cfg.richardson_levels step halvings.
/// Throws Error(stencil_failure) if no candidate stencil evaluates finitely.
Derivative derivative(const RealFn& f, double x, int order, const DiffConfig& cfg = {});

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

/// Solves f(x) = target for f increasing on the bracket. Bisection (geometric
/// when the bracket spans more than a factor 4 of positive values) alternates
/// with false-position steps. Returns once |f(x) - target| / max(1, |target|)
/// <= rel_tol or the bracket has collapsed to adjacent floating-point values.
double solve_increasing(const RealFn& f, double target, Bracket bracket, double rel_tol = 1e-14);

/// psi(h) = -log(-log(1 - e^-h)), i.e. -log(-log F) for a tail 1 - F = e^-h.
/// Throws Error(outside_tail_region) for h <= 0.
double neg_log_neg_log_cdf_from_hazard(double h);

/// rho(h) = h - psi(h) > 0, accurate even where it is below the resolution of h.
double hazard_tail_correction(double h);

/// {psi, psi', psi'', psi''', psi''''} at h.
std::array<double, 5> hazard_transform_jet(double h);

/// The hazard level h with psi(h) = level, i.e. -log(-expm1(-e^-level)).
double inverse_hazard_transform(double level);

/// log(F^n) = -exp(log_n + log(-log F)) given log(-log F). Saturates to -inf.
double log_cdf_power(double log_neg_log_cdf, double log_n);

}  // namespace penult::numerics
