#pragma once

#include <array>
#include <optional>
#include <string>

#include "penult/numerics.hpp"
#include "penult/slowly_varying.hpp"

namespace penult {

/// |theta - 1| below this counts as theta = 1.
inline constexpr double kThetaOneTolerance = 1e-12;
/// Relative residual accepted when inverting H by root finding.
inline constexpr double kHazardInverseTolerance = 1e-15;

/// tail_exp:    1 - F(x) = exp(-H(x))
/// log_cdf_exp: -log F(x) = exp(-H(x))
/// classical:   F and its density supplied directly
/// with H(x) = x^{1/theta} l(x) for the first two.
enum class Family { tail_exp, log_cdf_exp, classical };

std::string_view to_string(Family family) noexcept;

/// Distribution supplied through its tail in log space. log_hazard may be left
/// empty, in which case log_density - log_survival is used.
struct ClassicalSpec {
  numerics::RealFn cdf;
  numerics::RealFn log_survival;
  numerics::RealFn log_density;
  numerics::RealFn log_hazard;
  /// Lower end of the actual support (may be -infinity).
  double support_min = 0.0;
};

enum class DerivativePath { analytic, numeric };

std::string_view to_string(DerivativePath path) noexcept;

struct KDerivative {
  double value = 0.0;
  DerivativePath path = DerivativePath::analytic;
  double error_estimate = 0.0;
  bool low_confidence = false;
};

/// {k, k', k'', k'''} plus how the derivatives were obtained.
struct KJet {
  std::array<double, 4> values{};
  DerivativePath path = DerivativePath::analytic;
  bool low_confidence = false;
  /// Largest error estimate of the numeric derivatives (0 when analytic).
  double max_error_estimate = 0.0;
};

struct RvRatios {
  double r1 = 0.0;  ///< x^2 k'/(x k)
  double r2 = 0.0;  ///< x^3 k''/(x k)
  double r3 = 0.0;  ///< x^4 k'''/(x k)
  DerivativePath path = DerivativePath::analytic;
};

/// A Weibull-type distribution. Immutable once built; all evaluations are
/// const and free of shared state.
///
/// x^F = +infinity for every family. The representation only covers the tail
/// x >= support_lower; for tail_exp and log_cdf_exp the cdf is treated as 0
/// below it, while classical models evaluate their cdf down to support_min.
class WeibullTypeModel {
 public:
  static WeibullTypeModel tail_exp(std::string label, double theta, SlowlyVaryingSpec l,
                                   double support_lower = 0.0);
  static WeibullTypeModel log_cdf_exp(std::string label, double theta, SlowlyVaryingSpec l,
                                      double support_lower = 0.0);
  /// theta is the known reference Weibull-tail coefficient of the distribution.
  static WeibullTypeModel classical(std::string label, double theta, ClassicalSpec spec,
                                    double support_lower = 0.0);

  const std::string& label() const { return label_; }
  Family family() const { return family_; }
  double theta() const { return theta_; }
  bool theta_is_one() const;
  double support_lower() const { return support_lower_; }
  /// Smallest x at which cdf() is defined.
  double evaluation_lower() const;
  /// Null for classical models.
  const SlowlyVaryingSpec* slowly_varying() const { return l_ ? &*l_ : nullptr; }
  bool has_analytic_k_derivatives() const { return family_ != Family::classical; }

  /// H(x); for classical models -log(1 - F(x)).
  double cumulative_hazard(double x) const;
  /// {H, H', H'', H''', H''''} (tail_exp and log_cdf_exp only).
  std::array<double, 5> cumulative_hazard_jet(double x) const;
  /// H^{-1}(y). Closed form (y/c)^theta for constant l, root finding otherwise.
  double cumulative_hazard_inverse(double y) const;
  /// H^{-1}(y) by root finding regardless of l.
  double cumulative_hazard_inverse_by_root(double y) const;

  double cdf(double x) const;
  double log_cdf(double x) const;
  double density(double x) const;
  /// log(-log F(x)); +infinity where F underflows to 0.
  double log_neg_log_cdf(double x) const;

  /// k(x) = d/dx[-log(-log F(x))].
  double k_function(double x) const;
  /// k^{(order)}(x), order in [1,3]. The default path is analytic when the
  /// family allows it.
  KDerivative k_derivative(double x, int order, std::optional<DerivativePath> path = std::nullopt,
                           const numerics::DiffConfig& cfg = {}) const;
  KJet k_jet(double x, std::optional<DerivativePath> path = std::nullopt,
             const numerics::DiffConfig& cfg = {}) const;
  RvRatios rv_ratios(double x, std::optional<DerivativePath> path = std::nullopt) const;

 private:
  WeibullTypeModel() = default;

  void require_tail(double x) const;
  double increasing_from(double x0) const;
  std::array<double, 4> analytic_k_jet(double x) const;

  std::string label_;
  Family family_ = Family::tail_exp;
  double theta_ = 1.0;
  std::optional<SlowlyVaryingSpec> l_;
  std::optional<ClassicalSpec> classical_;
  double support_lower_ = 0.0;
};

/// Point (gamma, x) of the GEV family.
struct GevPoint {
  double gamma = 0.0;
  double x = 0.0;
};

bool in_gev_support(const GevPoint& p) noexcept;
/// G_gamma(x) = exp(-(1 + gamma x)^{-1/gamma}), exp(-e^{-x}) at gamma = 0.
/// Throws Error(outside_support) when 1 + gamma x <= 0.
double gev_cdf(const GevPoint& p);
double gev_density(const GevPoint& p);

}  // namespace penult
