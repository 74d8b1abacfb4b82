#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "penult/model.hpp"

namespace penult {

/// phi(t) = (1/k)'(t) = -k'(t)/k(t)^2, t on the x axis of F.
double phi(const WeibullTypeModel& model, double t);

/// 1/(1 - theta). Throws Error(theta_one_excluded) for theta = 1 and
/// Error(invalid_argument) for theta <= 0.
double gomes84_closed_form(double theta);

/// Verdict policy.
inline constexpr double kTerminalMagnitude = 0.05;
inline constexpr double kShrinkFactor = 0.5;
inline constexpr double kLimitAgreement = 0.05;
inline constexpr double kMaxFailedFraction = 0.2;
/// Richardson levels for sweeps on the numeric path.
inline constexpr int kSweepRichardsonLevels = 4;

enum class Condition { first_order, second_order, penultimate, anderson, gomes84 };

inline constexpr std::array<Condition, 5> kConditions = {Condition::first_order, Condition::second_order,
                                                         Condition::penultimate, Condition::anderson,
                                                         Condition::gomes84};

std::string_view to_string(Condition c) noexcept;

enum class VerdictKind { confirmed_decaying, confirmed_limit, not_confirmed };

std::string_view to_string(VerdictKind v) noexcept;

struct Verdict {
  VerdictKind kind = VerdictKind::not_confirmed;
  /// Observed limit (confirmed_limit only).
  std::optional<double> limit;
  /// Theoretical gomes84 limit 1/(1 - theta), when theta != 1.
  std::optional<double> expected;
  /// Why a condition was not confirmed; empty otherwise.
  std::string reason;
};

/// One sequence per condition along t_grid. Points that failed or were 0/0
/// hold NaN and are listed in `failed`.
struct ConditionSequence {
  std::vector<double> values;
  std::vector<std::size_t> failed;
  std::size_t degenerate = 0;
  Verdict verdict;
};

struct ConditionReport {
  std::vector<double> t_grid;
  DerivativePath path = DerivativePath::analytic;
  /// Largest derivative error estimate on the numeric path (0 when analytic).
  double max_error_estimate = 0.0;
  bool low_confidence = false;
  /// Indexed by Condition:
  ///   first_order  phi
  ///   second_order phi'/(k phi)
  ///   penultimate  phi''/(k phi')
  ///   anderson     k''/(k k')
  ///   gomes84      phi'/(k phi^2)
  std::array<ConditionSequence, 5> sequences;

  const ConditionSequence& operator[](Condition c) const { return sequences[static_cast<int>(c)]; }
};

/// Evaluates the five functionals along t_grid (ascending, >= 5 points, >= 4
/// decades, inside the support). Zero-limit conditions are confirmed_decaying
/// when the final magnitude is below 0.05 and below half the first; gomes84 is
/// confirmed_limit when its last two values agree within 5%. More than 20%
/// failed or degenerate points make a condition not_confirmed.
ConditionReport condition_sweep(const WeibullTypeModel& model, const std::vector<double>& t_grid);

}  // namespace penult
