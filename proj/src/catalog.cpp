#include "penult/catalog.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "penult/error.hpp"

namespace penult {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Mills ratio (1 - Phi(x))/phi(x) by its continued fraction, x > 0.
double mills_ratio(double x) {
  double t = x;
  for (int n = 200; n >= 1; --n) t = x + n / t;
  return 1.0 / t;
}

double normal_log_density(double x) { return -0.5 * x * x - 0.5 * std::log(2.0 * std::numbers::pi); }

// Q(s, x) = e^{-x} x^s / Gamma(s) * cf(s, x), modified Lentz, x > s + 1.
double gamma_tail_cf(double s, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h;
}

SlowlyVaryingSpec extended_weibull_l(double beta, double delta) {
  // G(s) = 1 - delta s e^{-beta s}, so that H(x) = x^beta - delta log x
  return from_log_scale("extended(" + std::to_string(beta) + "," + std::to_string(delta) + ")", std::exp(1.0),
                        [beta, delta](double s) {
                          std::array<double, 5> g{};
                          const double e = std::exp(-beta * s);
                          g[0] = 1.0 - delta * s * e;
                          double p = 1.0;  // (-beta)^{m-1}
                          for (int m = 1; m < 5; ++m) {
                            g[m] = -delta * e * (-beta * p * s + m * p);
                            p *= -beta;
                          }
                          return g;
                        });
}

const std::vector<CatalogEntry> kCatalog = {
    {"pure-weibull", Family::tail_exp, "Weibull: 1 - F = exp(-(x/lambda)^alpha)", "1/alpha",
     {{"theta", 2.0, "Weibull-tail coefficient (alternatively alpha = 1/theta)"}, {"lambda", 1.0, "scale"}}},
    {"weibull-log-power", Family::tail_exp, "H(x) = x^{1/theta} (log x)^p", "theta",
     {{"theta", 2.0, "Weibull-tail coefficient"}, {"sv-power", 1.0, "exponent p of log x"}}},
    {"weibull-inv-log", Family::tail_exp, "H(x) = x^{1/theta} (c + d/log x)", "theta",
     {{"theta", 2.0, "Weibull-tail coefficient"}, {"sv-c", 1.0, "constant c > 0"}, {"sv-d", 1.0, "coefficient d"}}},
    {"extended-weibull", Family::tail_exp, "H(x) = x^beta - delta log x", "1/beta",
     {{"beta", 0.5, "power of x"}, {"delta", 1.0, "log correction"}}},
    {"lcc-weibull", Family::log_cdf_exp, "-log F = exp(-x^{1/theta})", "theta",
     {{"theta", 2.0, "Weibull-tail coefficient"}}},
    {"gumbel-fixture", Family::log_cdf_exp, "exact Gumbel: -log F = exp(-x)", "1", {}},
    {"normal", Family::classical, "standard normal", "1/2", {}},
    {"exponential", Family::classical, "standard exponential", "1", {}},
    {"logistic", Family::classical, "standard logistic", "1", {}},
    {"gamma", Family::classical, "Gamma(shape, 1)", "1", {{"shape", 2.0, "shape parameter > 0"}}},
};

double param(const ModelParams& p, const CatalogEntry& entry, const std::string& name) {
  if (auto it = p.find(name); it != p.end()) return it->second;
  for (const auto& info : entry.params) {
    if (info.name == name) return info.default_value;
  }
  throw Error(ErrorCode::invalid_argument, entry.name + ": no parameter " + name);
}

void check_params(const ModelParams& p, const CatalogEntry& entry) {
  for (const auto& [name, value] : p) {
    bool known = entry.name == "pure-weibull" && name == "alpha";
    for (const auto& info : entry.params) known = known || info.name == name;
    if (!known) throw Error(ErrorCode::invalid_argument, entry.name + " does not take parameter " + name);
    if (!std::isfinite(value)) throw Error(ErrorCode::invalid_argument, name + " must be finite");
  }
}

std::string label_of(const std::string& name, const ModelParams& p) {
  std::string label = name;
  for (const auto& [k, v] : p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    label += " " + k + "=" + buf;
  }
  return label;
}

}  // namespace

namespace classical {

ClassicalSpec normal() {
  ClassicalSpec s;
  s.cdf = [](double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); };
  s.log_survival = [](double x) {
    if (x < 6.0) return std::log(0.5 * std::erfc(x / std::numbers::sqrt2));
    return normal_log_density(x) + std::log(mills_ratio(x));
  };
  s.log_density = normal_log_density;
  s.log_hazard = [](double x) {
    if (x < 6.0) return normal_log_density(x) - std::log(0.5 * std::erfc(x / std::numbers::sqrt2));
    return -std::log(mills_ratio(x));
  };
  s.support_min = -kInf;
  return s;
}

ClassicalSpec exponential() {
  ClassicalSpec s;
  s.cdf = [](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); };
  s.log_survival = [](double x) { return x <= 0.0 ? 0.0 : -x; };
  s.log_density = [](double x) { return x < 0.0 ? -kInf : -x; };
  s.log_hazard = [](double x) { return x < 0.0 ? -kInf : 0.0; };
  s.support_min = 0.0;
  return s;
}

ClassicalSpec logistic() {
  ClassicalSpec s;
  s.cdf = [](double x) { return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x)); };
  s.log_survival = [](double x) { return x >= 0.0 ? -x - std::log1p(std::exp(-x)) : -std::log1p(std::exp(x)); };
  s.log_density = [](double x) {
    const double ax = std::abs(x);
    return -ax - 2.0 * std::log1p(std::exp(-ax));
  };
  // hazard = F
  s.log_hazard = [](double x) { return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); };
  s.support_min = -kInf;
  return s;
}

ClassicalSpec gamma(double shape) {
  if (!(shape > 0.0)) throw Error(ErrorCode::invalid_argument, "gamma shape must be positive");
  ClassicalSpec s;
  const double lg = std::lgamma(shape);
  s.cdf = [shape](double x) { return x <= 0.0 ? 0.0 : boost::math::gamma_p(shape, x); };
  s.log_density = [shape, lg](double x) {
    if (x < 0.0) return -kInf;
    return (shape - 1.0) * std::log(x) - x - lg;
  };
  s.log_survival = [shape, lg](double x) {
    if (x <= 0.0) return 0.0;
    if (x <= shape + 1.0) return std::log(boost::math::gamma_q(shape, x));
    return -x + shape * std::log(x) - lg + std::log(gamma_tail_cf(shape, x));
  };
  s.log_hazard = [shape, lg, ld = s.log_density](double x) {
    if (x <= 0.0) return x < 0.0 ? -kInf : ld(x);
    if (x <= shape + 1.0) return ld(x) - std::log(boost::math::gamma_q(shape, x));
    return -std::log(x) - std::log(gamma_tail_cf(shape, x));
  };
  s.support_min = 0.0;
  return s;
}

}  // namespace classical

const std::vector<CatalogEntry>& catalog() { return kCatalog; }

const CatalogEntry& catalog_entry(const std::string& name) {
  for (const auto& entry : kCatalog) {
    if (entry.name == name) return entry;
  }
  throw Error(ErrorCode::unknown_model, "unknown model '" + name + "'");
}

WeibullTypeModel make_model(const std::string& name, const ModelParams& p) {
  const CatalogEntry& entry = catalog_entry(name);
  check_params(p, entry);
  const std::string label = label_of(name, p);

  if (name == "pure-weibull") {
    double theta = param(p, entry, "theta");
    if (p.count("alpha")) {
      if (p.count("theta")) throw Error(ErrorCode::invalid_argument, "give theta or alpha, not both");
      const double alpha = p.at("alpha");
      if (!(alpha > 0.0)) throw Error(ErrorCode::invalid_argument, "alpha must be positive");
      theta = 1.0 / alpha;
    }
    const double lambda = param(p, entry, "lambda");
    if (!(lambda > 0.0)) throw Error(ErrorCode::invalid_argument, "lambda must be positive");
    // (x/lambda)^{1/theta} = x^{1/theta} lambda^{-1/theta}
    return WeibullTypeModel::tail_exp(label, theta, sv::constant(std::pow(lambda, -1.0 / theta)));
  }
  if (name == "weibull-log-power") {
    return WeibullTypeModel::tail_exp(label, param(p, entry, "theta"), sv::log_power(param(p, entry, "sv-power")));
  }
  if (name == "weibull-inv-log") {
    return WeibullTypeModel::tail_exp(label, param(p, entry, "theta"),
                                      sv::constant_plus_inverse_log(param(p, entry, "sv-c"), param(p, entry, "sv-d")));
  }
  if (name == "extended-weibull") {
    const double beta = param(p, entry, "beta");
    if (!(beta > 0.0)) throw Error(ErrorCode::invalid_argument, "beta must be positive");
    return WeibullTypeModel::tail_exp(label, 1.0 / beta, extended_weibull_l(beta, param(p, entry, "delta")));
  }
  if (name == "lcc-weibull") {
    return WeibullTypeModel::log_cdf_exp(label, param(p, entry, "theta"), sv::constant(1.0));
  }
  if (name == "gumbel-fixture") return WeibullTypeModel::log_cdf_exp(label, 1.0, sv::constant(1.0));
  if (name == "normal") return WeibullTypeModel::classical(label, 0.5, classical::normal());
  if (name == "exponential") return WeibullTypeModel::classical(label, 1.0, classical::exponential());
  if (name == "logistic") return WeibullTypeModel::classical(label, 1.0, classical::logistic());
  return WeibullTypeModel::classical(label, 1.0, classical::gamma(param(p, entry, "shape")));
}

}  // namespace penult
