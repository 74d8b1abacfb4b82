#include "penult/vonmises.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "penult/error.hpp"

namespace penult {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Ratio {
  double value;
  bool degenerate;
};

Ratio ratio(double num, double den) {
  if (den == 0.0) return {kNaN, num == 0.0};
  return {num / den, false};
}

std::string format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void judge(ConditionSequence& seq, Condition c, const std::optional<double>& expected) {
  const std::size_t n = seq.values.size();
  if (static_cast<double>(seq.failed.size()) > kMaxFailedFraction * static_cast<double>(n)) {
    seq.verdict.reason = seq.degenerate == seq.failed.size()
                             ? "degenerate 0/0 at " + std::to_string(seq.degenerate) + " of " + std::to_string(n) +
                                   " points"
                             : std::to_string(seq.failed.size()) + " of " + std::to_string(n) +
                                   " points failed to evaluate";
    return;
  }
  std::vector<double> ok;
  for (double v : seq.values) {
    if (std::isfinite(v)) ok.push_back(v);
  }
  if (c == Condition::gomes84) {
    seq.verdict.expected = expected;
    const double last = ok.back();
    const double prev = ok[ok.size() - 2];
    if (std::abs(last - prev) <= kLimitAgreement * std::abs(last)) {
      seq.verdict.kind = VerdictKind::confirmed_limit;
      seq.verdict.limit = last;
    } else {
      seq.verdict.reason = "last two values " + format(prev) + ", " + format(last) + " differ by more than 5%";
    }
    return;
  }
  const double first = std::abs(ok.front());
  const double last = std::abs(ok.back());
  // an identically vanishing sequence has reached its limit
  if (last < kTerminalMagnitude && (last < kShrinkFactor * first || last == 0.0)) {
    seq.verdict.kind = VerdictKind::confirmed_decaying;
  } else {
    seq.verdict.reason = "terminal magnitude " + format(last) + " against initial " + format(first);
  }
}

}  // namespace

double phi(const WeibullTypeModel& model, double t) {
  const double k = model.k_function(t);
  return -model.k_derivative(t, 1).value / (k * k);
}

double gomes84_closed_form(double theta) {
  if (!(theta > 0.0)) throw Error(ErrorCode::invalid_argument, "theta must be positive");
  if (std::abs(theta - 1.0) < kThetaOneTolerance) throw Error(ErrorCode::theta_one_excluded, "1/(1 - theta) needs theta != 1");
  return 1.0 / (1.0 - theta);
}

std::string_view to_string(Condition c) noexcept {
  switch (c) {
    case Condition::first_order: return "first_order";
    case Condition::second_order: return "second_order";
    case Condition::penultimate: return "penultimate";
    case Condition::anderson: return "anderson";
    case Condition::gomes84: return "gomes84";
  }
  return "unknown";
}

std::string_view to_string(VerdictKind v) noexcept {
  switch (v) {
    case VerdictKind::confirmed_decaying: return "confirmed_decaying";
    case VerdictKind::confirmed_limit: return "confirmed_limit";
    case VerdictKind::not_confirmed: return "not_confirmed";
  }
  return "unknown";
}

ConditionReport condition_sweep(const WeibullTypeModel& model, const std::vector<double>& t_grid) {
  if (t_grid.size() < 5 || !std::is_sorted(t_grid.begin(), t_grid.end()) ||
      std::adjacent_find(t_grid.begin(), t_grid.end()) != t_grid.end() || !(t_grid.front() > 0.0) ||
      t_grid.back() < 1e4 * t_grid.front()) {
    throw Error(ErrorCode::insufficient_grid, "need at least 5 ascending points spanning 4 decades");
  }
  ConditionReport report;
  report.t_grid = t_grid;
  report.path = model.has_analytic_k_derivatives() ? DerivativePath::analytic : DerivativePath::numeric;
  numerics::DiffConfig cfg;
  cfg.richardson_levels = kSweepRichardsonLevels;

  for (auto& seq : report.sequences) seq.values.assign(t_grid.size(), kNaN);

  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    std::array<Ratio, 5> r{};
    try {
      const KJet jet = model.k_jet(t, report.path, cfg);
      report.low_confidence = report.low_confidence || jet.low_confidence;
      report.max_error_estimate = std::max(report.max_error_estimate, jet.max_error_estimate);
      const auto& [k, k1, k2, k3] = jet.values;
      const double f = -k1 / (k * k);
      const double f1 = (2.0 * k1 * k1 - k * k2) / (k * k * k);
      const double f2 = -k3 / (k * k) + 6.0 * k1 * k2 / (k * k * k) - 6.0 * k1 * k1 * k1 / (k * k * k * k);
      r = {Ratio{f, false}, ratio(f1, k * f), ratio(f2, k * f1), ratio(k2, k * k1), ratio(f1, k * f * f)};
    } catch (const Error&) {
      r.fill(Ratio{kNaN, false});
    }
    for (int c = 0; c < 5; ++c) {
      auto& seq = report.sequences[c];
      seq.values[i] = r[c].value;
      if (!std::isfinite(r[c].value)) {
        seq.failed.push_back(i);
        if (r[c].degenerate) ++seq.degenerate;
      }
    }
  }

  std::optional<double> expected;
  if (!model.theta_is_one()) expected = gomes84_closed_form(model.theta());
  for (Condition c : kConditions) judge(report.sequences[static_cast<int>(c)], c, expected);
  return report;
}

}  // namespace penult
