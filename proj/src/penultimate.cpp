#include "penult/penultimate.hpp"

#include <cmath>
#include <string>

#include "penult/error.hpp"
#include "penult/norming.hpp"

namespace penult {

namespace {

double phi_at(const WeibullTypeModel& model, double x) {
  const double k = model.k_function(x);
  return -model.k_derivative(x, 1).value / (k * k);
}

}  // namespace

std::string_view to_string(Classification c) noexcept {
  switch (c) {
    case Classification::frechet: return "frechet";
    case Classification::weibull_class: return "weibull";
    case Classification::excluded_theta_one: return "excluded_theta_one";
  }
  return "unknown";
}

std::string_view to_string(GammaMode mode) noexcept { return mode == GammaMode::exact ? "exact" : "asymptotic"; }

double gamma_of_t(const WeibullTypeModel& model, double t) {
  const double x = model.family() == Family::classical
                       ? model.cumulative_hazard_inverse(numerics::inverse_hazard_transform(t))
                       : model.cumulative_hazard_inverse(t);
  return phi_at(model, x);
}

PenultimateAsymptotics penultimate_asymptotics(const WeibullTypeModel& model, double log_n) {
  if (!(log_n > 0.0)) throw Error(ErrorCode::invalid_block_size, "log_n must be positive");
  if (model.theta_is_one()) {
    throw Error(ErrorCode::theta_one_excluded,
                model.label() + ": asymptotic penultimate quantities are undefined for theta = 1");
  }
  const double theta = model.theta();
  PenultimateAsymptotics a;
  a.gamma_asymptotic = (theta - 1.0) / log_n;
  a.classification = theta > 1.0 ? Classification::frechet : Classification::weibull_class;
  a.rate_ultimate = (1.0 - theta) / log_n;
  a.rate_penultimate = 2.0 * theta * (1.0 - theta) / (log_n * log_n);
  return a;
}

PenultimateIndex penultimate_index(const WeibullTypeModel& model, double log_n) {
  PenultimateIndex idx;
  idx.log_n = log_n;
  idx.b_exact = location(model, log_n).b_exact;
  const double b = idx.b_exact;
  const auto jet = model.k_jet(b);
  const double k = jet.values[0];
  const double k1 = jet.values[1];
  const double k2 = jet.values[2];
  idx.gamma_exact = -k1 / (k * k);
  idx.ultimate_rate_exact = k1 / (k * k);
  const double a1 = 1.0 / model.theta() - 1.0;
  const double a2 = 1.0 / model.theta() - 2.0;
  const double bk = b * k;
  idx.gamma_prime_exact = (2.0 * a1 * a1 - a1 * a2) / (bk * bk);
  idx.gamma_prime_direct = (2.0 * k1 * k1 - k * k2) / (k * k * k * k);
  if (!model.theta_is_one()) {
    const auto asym = penultimate_asymptotics(model, log_n);
    idx.gamma_asymptotic = asym.gamma_asymptotic;
    idx.classification = asym.classification;
    idx.rate_ultimate = asym.rate_ultimate;
    idx.rate_penultimate = asym.rate_penultimate;
  }
  return idx;
}

void GridSpec::validate() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi) || count < 100) {
    throw Error(ErrorCode::invalid_argument, "grid needs finite lo < hi and at least 100 points");
  }
}

std::vector<double> GridSpec::points() const {
  validate();
  std::vector<double> x(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) x[i] = i + 1 == count ? hi : lo + (hi - lo) * i / (count - 1);
  return x;
}

std::vector<double> normalized_maximum_cdf(const WeibullTypeModel& model, double log_n,
                                           const std::vector<double>& x) {
  const NormingConstants nc = norming(model, log_n);
  const double lower =
      model.family() == Family::classical ? model.evaluation_lower() : model.support_lower();
  std::vector<double> out;
  out.reserve(x.size());
  for (double xi : x) {
    const double y = nc.a_scale * xi + nc.b_exact;
    if (y < lower) {
      out.push_back(0.0);
      continue;
    }
    out.push_back(std::exp(numerics::log_cdf_power(model.log_neg_log_cdf(y), log_n)));
  }
  return out;
}

ErrorComparison error_comparison(const WeibullTypeModel& model, double log_n, const GridSpec& grid,
                                 GammaMode mode) {
  const std::vector<double> x = grid.points();
  ErrorComparison ec;
  ec.log_n = log_n;
  ec.grid = grid;
  ec.gamma_mode = mode;
  ec.gamma_used = mode == GammaMode::exact ? penultimate_index(model, log_n).gamma_exact
                                           : penultimate_asymptotics(model, log_n).gamma_asymptotic;
  const std::vector<double> fn = normalized_maximum_cdf(model, log_n, x);

  bool any_penultimate = false;
  ec.argmax_ultimate = x.front();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double ult = std::abs(fn[i] - gev_cdf({0.0, x[i]}));
    if (ult > ec.sup_error_ultimate) {
      ec.sup_error_ultimate = ult;
      ec.argmax_ultimate = x[i];
    }
    const GevPoint p{ec.gamma_used, x[i]};
    if (!in_gev_support(p)) {
      ec.clipped.push_back(x[i]);
      continue;
    }
    const double pen = std::abs(fn[i] - gev_cdf(p));
    if (!any_penultimate || pen > ec.sup_error_penultimate) {
      ec.sup_error_penultimate = pen;
      ec.argmax_penultimate = x[i];
    }
    any_penultimate = true;
  }
  if (!any_penultimate) {
    throw Error(ErrorCode::grid_support_empty, "no grid point satisfies 1 + gamma x > 0 for gamma = " +
                                                   std::to_string(ec.gamma_used));
  }
  try {
    ec.remainder_max_deviation = remainder_profile(model, log_n, grid).max_deviation;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::degenerate_profile) throw;
  }
  return ec;
}

RemainderProfile remainder_profile(const WeibullTypeModel& model, double log_n, const GridSpec& grid) {
  const std::vector<double> x = grid.points();
  const PenultimateIndex idx = penultimate_index(model, log_n);
  const std::vector<double> fn = normalized_maximum_cdf(model, log_n, x);
  RemainderProfile rp;
  double residual = 0.0;
  bool any_residual = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double den = 0.5 * x[i] * x[i] * idx.ultimate_rate_exact * gev_density({0.0, x[i]});
    if (!(std::abs(den) > kRemainderCutoff)) continue;
    const double dev = std::abs((fn[i] - gev_cdf({0.0, x[i]})) / den - 1.0);
    if (rp.points_used == 0 || dev > rp.max_deviation) {
      rp.max_deviation = dev;
      rp.argmax = x[i];
    }
    ++rp.points_used;
    const GevPoint p{idx.gamma_exact, x[i]};
    if (in_gev_support(p)) {
      residual = std::max(residual, std::abs(fn[i] - gev_cdf(p)));
      any_residual = true;
    }
  }
  if (rp.points_used == 0) {
    throw Error(ErrorCode::degenerate_profile, model.label() + ": remainder denominators vanish on the grid");
  }
  if (any_residual && idx.gamma_prime_exact != 0.0) rp.penultimate_residual = residual / std::abs(idx.gamma_prime_exact);
  return rp;
}

}  // namespace penult
