#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "penult/model.hpp"

namespace penult {

/// Sign class of the penultimate GEV: Frechet for theta > 1, Weibull for theta < 1.
enum class Classification { frechet, weibull_class, excluded_theta_one };

std::string_view to_string(Classification c) noexcept;

/// Leading-order quantities that only exist for theta != 1.
struct PenultimateAsymptotics {
  double gamma_asymptotic = 0.0;  ///< (theta - 1)/log n
  Classification classification = Classification::excluded_theta_one;
  double rate_ultimate = 0.0;     ///< (1 - theta)/log n
  double rate_penultimate = 0.0;  ///< 2 theta (1 - theta)/(log n)^2
};

struct PenultimateIndex {
  double log_n = 0.0;
  double b_exact = 0.0;
  /// -k'(b)/k(b)^2 at the exact location b.
  double gamma_exact = 0.0;
  /// Empty when theta = 1; classification is then excluded_theta_one.
  std::optional<double> gamma_asymptotic;
  Classification classification = Classification::excluded_theta_one;
  std::optional<double> rate_ultimate;
  std::optional<double> rate_penultimate;
  /// k'(b)/k(b)^2 = -gamma_exact, the exact counterpart of rate_ultimate.
  double ultimate_rate_exact = 0.0;
  /// (2(1/theta - 1)^2 - (1/theta - 1)(1/theta - 2)) / (b k(b))^2
  double gamma_prime_exact = 0.0;
  /// d/dt of gamma along the level t = -log(-log F(x)): (2k'^2 - k k'')/k^4.
  double gamma_prime_direct = 0.0;
};

/// gamma(t) = phi(x) = -k'(x)/k(x)^2 with x = H^{-1}(t); for classical models
/// x solves -log(-log F(x)) = t.
double gamma_of_t(const WeibullTypeModel& model, double t);

/// Throws Error(theta_one_excluded) when theta = 1.
PenultimateAsymptotics penultimate_asymptotics(const WeibullTypeModel& model, double log_n);

/// Exact fields are always filled; asymptotic ones only for theta != 1.
PenultimateIndex penultimate_index(const WeibullTypeModel& model, double log_n);

/// Uniform grid lo, ..., hi with count >= 100 points.
struct GridSpec {
  double lo = -3.0;
  double hi = 6.0;
  int count = 1000;

  /// Throws Error(invalid_argument) unless lo < hi, both finite, count >= 100.
  void validate() const;
  std::vector<double> points() const;
};

/// Remainder points with |denominator| at or below this are skipped.
inline constexpr double kRemainderCutoff = 1e-12;

enum class GammaMode { exact, asymptotic };

std::string_view to_string(GammaMode mode) noexcept;

struct RemainderProfile {
  /// max |R(x) - 1| with R = (F^n(ax+b) - G_0(x)) / ((x^2/2) (k'(b)/k(b)^2) g_0(x)).
  double max_deviation = 0.0;
  double argmax = 0.0;
  int points_used = 0;
  /// max |F^n(ax+b) - G_{gamma_n}(x)| / |gamma_prime_exact| over the same points
  /// inside the G_{gamma_n} support. Reported only.
  std::optional<double> penultimate_residual;
};

struct ErrorComparison {
  double log_n = 0.0;
  GridSpec grid;
  GammaMode gamma_mode = GammaMode::exact;
  double gamma_used = 0.0;
  double sup_error_ultimate = 0.0;
  double sup_error_penultimate = 0.0;
  double argmax_ultimate = 0.0;
  double argmax_penultimate = 0.0;
  /// Grid points outside 1 + gamma x > 0, excluded from the penultimate sup.
  std::vector<double> clipped;
  /// Empty when the profile is degenerate.
  std::optional<double> remainder_max_deviation;
};

/// F^n(a x + b) with the exact norming constants, evaluated in log space.
std::vector<double> normalized_maximum_cdf(const WeibullTypeModel& model, double log_n,
                                           const std::vector<double>& x);

/// Sup distances of F^n(a x + b) to G_0 and to G_{gamma_n} over the grid.
/// gamma_n is gamma_exact, or (theta - 1)/log n in asymptotic mode (which
/// throws Error(theta_one_excluded) for theta = 1). Throws
/// Error(grid_support_empty) if no grid point lies in the G_{gamma_n} support.
ErrorComparison error_comparison(const WeibullTypeModel& model, double log_n, const GridSpec& grid,
                                 GammaMode mode = GammaMode::exact);

/// Throws Error(degenerate_profile) when every denominator is below kRemainderCutoff.
RemainderProfile remainder_profile(const WeibullTypeModel& model, double log_n, const GridSpec& grid);

}  // namespace penult
