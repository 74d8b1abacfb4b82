#include "penult/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "penult/error.hpp"

namespace penult {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr double kBinomial[5][5] = {
    {1, 0, 0, 0, 0},
    {1, 1, 0, 0, 0},
    {1, 2, 1, 0, 0},
    {1, 3, 3, 1, 0},
    {1, 4, 6, 4, 1},
};

double falling(double a, int m) {
  double acc = 1.0;
  for (int i = 0; i < m; ++i) acc *= a - i;
  return acc;
}

void validate_theta(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw Error(ErrorCode::invalid_argument, "theta must be positive and finite");
  }
}

}  // namespace

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::tail_exp: return "tail_exp";
    case Family::log_cdf_exp: return "log_cdf_exp";
    case Family::classical: return "classical";
  }
  return "unknown";
}

std::string_view to_string(DerivativePath path) noexcept {
  return path == DerivativePath::analytic ? "analytic" : "numeric";
}

WeibullTypeModel WeibullTypeModel::tail_exp(std::string label, double theta, SlowlyVaryingSpec l,
                                            double support_lower) {
  validate_theta(theta);
  if (!(support_lower >= 0.0)) throw Error(ErrorCode::invalid_argument, "support_lower must be >= 0");
  WeibullTypeModel m;
  m.label_ = std::move(label);
  m.family_ = Family::tail_exp;
  m.theta_ = theta;
  m.support_lower_ = std::max(support_lower, l.domain_lower);
  m.l_ = std::move(l);
  if (!m.l_->is_constant) m.support_lower_ = m.increasing_from(m.support_lower_);
  return m;
}

// Smallest x = x0 * 2^m at which l > 0 and x H'(x)/H(x) = a + x l'/l stays above a/2.
double WeibullTypeModel::increasing_from(double x0) const {
  const double a = 1.0 / theta_;
  double x = std::max(x0, 1.0);
  for (int i = 0; i < 1000; ++i, x *= 2.0) {
    const double l = l_->value(x);
    if (!(l > 0.0) || !std::isfinite(l)) continue;
    if (a + x * l_->derivative(1, x) / l > 0.5 * a) return x;
  }
  throw Error(ErrorCode::invalid_argument, label_ + ": H is not increasing on any tail interval");
}

WeibullTypeModel WeibullTypeModel::log_cdf_exp(std::string label, double theta, SlowlyVaryingSpec l,
                                               double support_lower) {
  auto m = tail_exp(std::move(label), theta, std::move(l), support_lower);
  m.family_ = Family::log_cdf_exp;
  return m;
}

WeibullTypeModel WeibullTypeModel::classical(std::string label, double theta, ClassicalSpec spec,
                                             double support_lower) {
  validate_theta(theta);
  if (!(support_lower >= 0.0)) throw Error(ErrorCode::invalid_argument, "support_lower must be >= 0");
  if (!spec.cdf || !spec.log_survival || !spec.log_density) {
    throw Error(ErrorCode::invalid_argument, "classical model needs cdf, log_survival and log_density");
  }
  if (!spec.log_hazard) {
    spec.log_hazard = [ls = spec.log_survival, ld = spec.log_density](double x) { return ld(x) - ls(x); };
  }
  WeibullTypeModel m;
  m.label_ = std::move(label);
  m.family_ = Family::classical;
  m.theta_ = theta;
  m.support_lower_ = support_lower;
  m.classical_ = std::move(spec);
  return m;
}

bool WeibullTypeModel::theta_is_one() const { return std::abs(theta_ - 1.0) < kThetaOneTolerance; }

double WeibullTypeModel::evaluation_lower() const {
  return family_ == Family::classical ? classical_->support_min : support_lower_;
}

void WeibullTypeModel::require_tail(double x) const {
  if (!(x >= evaluation_lower())) {
    throw Error(ErrorCode::below_support, label_ + ": x = " + std::to_string(x) + " below support");
  }
}

double WeibullTypeModel::cumulative_hazard(double x) const {
  require_tail(x);
  if (family_ == Family::classical) return -classical_->log_survival(x);
  return std::pow(x, 1.0 / theta_) * l_->value(x);
}

std::array<double, 5> WeibullTypeModel::cumulative_hazard_jet(double x) const {
  if (family_ == Family::classical) {
    throw Error(ErrorCode::invalid_argument, "hazard derivatives need an explicit slowly varying part");
  }
  require_tail(x);
  // Leibniz on x^a l(x): H^{(j)} = x^{a-j} l sum_i C(j,i) (a)_{j-i} x^i l^{(i)}/l
  const double a = 1.0 / theta_;
  const double l = l_->value(x);
  std::array<double, 5> ratio{1.0, 0.0, 0.0, 0.0, 0.0};
  if (!l_->is_constant) {
    double xi = 1.0;
    for (int i = 1; i <= 4; ++i) {
      xi *= x;
      ratio[i] = xi * l_->derivative(i, x) / l;
    }
  }
  std::array<double, 5> jet{};
  jet[0] = std::pow(x, a) * l;
  for (int j = 1; j <= 4; ++j) {
    double acc = 0.0;
    for (int i = 0; i <= j; ++i) acc += kBinomial[j][i] * falling(a, j - i) * ratio[i];
    // exact zeros (integer a) stay zero even where x^{a-j} blows up
    jet[j] = acc == 0.0 ? 0.0 : std::pow(x, a - j) * l * acc;
  }
  return jet;
}

double WeibullTypeModel::cumulative_hazard_inverse_by_root(double y) const {
  double lo = support_lower_;
  // classical models may have their level below support_lower; walk down towards support_min
  if (family_ == Family::classical) {
    for (double step = 1.0; lo > evaluation_lower() && cumulative_hazard(lo) > y; step *= 2.0) {
      lo = std::max(lo - step, evaluation_lower());
    }
  }
  const double h_lo = cumulative_hazard(lo);
  if (!(y >= h_lo)) {
    throw Error(ErrorCode::below_range, label_ + ": y = " + std::to_string(y) + " below H(support_lower)");
  }
  if (y == h_lo) return lo;
  numerics::RealFn h = [this](double x) { return cumulative_hazard(x); };
  double bracket_lo = lo;
  double hi = std::max(2.0, 2.0 * std::abs(lo));
  while (cumulative_hazard(hi) < y) {
    bracket_lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw Error(ErrorCode::bracket_miss, label_ + ": H never reaches y = " + std::to_string(y));
  }
  return numerics::solve_increasing(h, y, {bracket_lo, hi}, kHazardInverseTolerance);
}

double WeibullTypeModel::cumulative_hazard_inverse(double y) const {
  if (family_ != Family::classical && l_->is_constant) {
    const double h_lo = cumulative_hazard(support_lower_);
    if (!(y >= h_lo)) {
      throw Error(ErrorCode::below_range, label_ + ": y = " + std::to_string(y) + " below H(support_lower)");
    }
    return std::pow(y / l_->constant_value, theta_);
  }
  return cumulative_hazard_inverse_by_root(y);
}

double WeibullTypeModel::cdf(double x) const {
  if (family_ != Family::classical && x < support_lower_) return 0.0;
  require_tail(x);
  switch (family_) {
    case Family::tail_exp: return -std::expm1(-cumulative_hazard(x));
    case Family::log_cdf_exp: return std::exp(-std::exp(-cumulative_hazard(x)));
    case Family::classical: return classical_->cdf(x);
  }
  return 0.0;
}

double WeibullTypeModel::log_cdf(double x) const {
  if (family_ != Family::classical && x < support_lower_) return -kInf;
  require_tail(x);
  switch (family_) {
    case Family::tail_exp: return std::log1p(-std::exp(-cumulative_hazard(x)));
    case Family::log_cdf_exp: return -std::exp(-cumulative_hazard(x));
    case Family::classical: {
      const double log_s = classical_->log_survival(x);
      return log_s < -0.5 ? std::log1p(-std::exp(log_s)) : std::log(classical_->cdf(x));
    }
  }
  return 0.0;
}

double WeibullTypeModel::density(double x) const {
  if (family_ != Family::classical && x < support_lower_) return 0.0;
  require_tail(x);
  switch (family_) {
    case Family::tail_exp: {
      const auto jet = cumulative_hazard_jet(x);
      return jet[1] * std::exp(-jet[0]);
    }
    case Family::log_cdf_exp: {
      const auto jet = cumulative_hazard_jet(x);
      const double u = std::exp(-jet[0]);
      return std::exp(-u) * u * jet[1];
    }
    case Family::classical: return std::exp(classical_->log_density(x));
  }
  return 0.0;
}

double WeibullTypeModel::log_neg_log_cdf(double x) const {
  if (family_ != Family::classical && x < support_lower_) return kInf;
  const double h = cumulative_hazard(x);
  if (family_ == Family::log_cdf_exp) return -h;
  if (!(h > 0.0)) return kInf;
  return -numerics::neg_log_neg_log_cdf_from_hazard(h);
}

double WeibullTypeModel::k_function(double x) const {
  require_tail(x);
  if (family_ == Family::classical) {
    const double h = cumulative_hazard(x);
    const double log_hazard = classical_->log_hazard(x);
    if (!(h > 0.0) || !std::isfinite(h) || !std::isfinite(log_hazard)) {
      throw Error(ErrorCode::tail_underflow, label_ + ": F(x) is numerically 0 or 1 at x = " + std::to_string(x));
    }
    return numerics::hazard_transform_jet(h)[1] * std::exp(log_hazard);
  }
  return analytic_k_jet(x)[0];
}

std::array<double, 4> WeibullTypeModel::analytic_k_jet(double x) const {
  const auto h = cumulative_hazard_jet(x);
  if (family_ == Family::log_cdf_exp) return {h[1], h[2], h[3], h[4]};
  if (!(h[0] > 0.0) || !std::isfinite(h[0])) {
    throw Error(ErrorCode::tail_underflow, label_ + ": F(x) is numerically 0 or 1 at x = " + std::to_string(x));
  }
  // Faa di Bruno for k = d/dx psi(H(x))
  const auto p = numerics::hazard_transform_jet(h[0]);
  const double h1 = h[1];
  const double h2 = h[2];
  const double h3 = h[3];
  const double h4 = h[4];
  return {
      p[1] * h1,
      p[2] * h1 * h1 + p[1] * h2,
      p[3] * h1 * h1 * h1 + 3.0 * p[2] * h1 * h2 + p[1] * h3,
      p[4] * h1 * h1 * h1 * h1 + 6.0 * p[3] * h1 * h1 * h2 + p[2] * (3.0 * h2 * h2 + 4.0 * h1 * h3) + p[1] * h4,
  };
}

KDerivative WeibullTypeModel::k_derivative(double x, int order, std::optional<DerivativePath> path,
                                           const numerics::DiffConfig& cfg) const {
  if (order < 1 || order > 3) throw Error(ErrorCode::invalid_argument, "k derivative order must be in [1,3]");
  require_tail(x);
  const DerivativePath chosen = path.value_or(has_analytic_k_derivatives() ? DerivativePath::analytic
                                                                           : DerivativePath::numeric);
  if (chosen == DerivativePath::analytic) {
    if (!has_analytic_k_derivatives()) {
      throw Error(ErrorCode::invalid_argument, label_ + ": no analytic k derivatives for classical models");
    }
    return {analytic_k_jet(x)[order], DerivativePath::analytic, 0.0, false};
  }
  const numerics::RealFn k = [this](double v) { return k_function(v); };
  const auto d = numerics::derivative(k, x, order, cfg);
  return {d.value, DerivativePath::numeric, d.error_estimate, d.low_confidence};
}

KJet WeibullTypeModel::k_jet(double x, std::optional<DerivativePath> path, const numerics::DiffConfig& cfg) const {
  const DerivativePath chosen = path.value_or(has_analytic_k_derivatives() ? DerivativePath::analytic
                                                                           : DerivativePath::numeric);
  KJet jet;
  jet.path = chosen;
  if (chosen == DerivativePath::analytic) {
    require_tail(x);
    if (!has_analytic_k_derivatives()) {
      throw Error(ErrorCode::invalid_argument, label_ + ": no analytic k derivatives for classical models");
    }
    jet.values = analytic_k_jet(x);
    return jet;
  }
  jet.values[0] = k_function(x);
  for (int order = 1; order <= 3; ++order) {
    const auto d = k_derivative(x, order, DerivativePath::numeric, cfg);
    jet.values[order] = d.value;
    jet.low_confidence = jet.low_confidence || d.low_confidence;
    jet.max_error_estimate = std::max(jet.max_error_estimate, d.error_estimate);
  }
  return jet;
}

RvRatios WeibullTypeModel::rv_ratios(double x, std::optional<DerivativePath> path) const {
  const auto jet = k_jet(x, path);
  const auto& k = jet.values;
  return {x * k[1] / k[0], x * x * k[2] / k[0], x * x * x * k[3] / k[0], jet.path};
}

}  // namespace penult
