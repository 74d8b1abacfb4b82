#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <functional>

#include "doctest.h"
#include "penult/catalog.hpp"
#include "penult/error.hpp"
#include "penult/model.hpp"

using namespace penult;

namespace {

std::optional<ErrorCode> code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

WeibullTypeModel weibull(double theta) { return make_model("pure-weibull", {{"theta", theta}}); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const std::vector<std::pair<std::string, ModelParams>> kTailExpBuiltins = {
    {"pure-weibull", {{"theta", 0.25}}},
    {"pure-weibull", {{"theta", 0.5}}},
    {"pure-weibull", {{"theta", 2.0}}},
    {"pure-weibull", {{"theta", 4.0}}},
    {"pure-weibull", {{"alpha", 1.5}, {"lambda", 3.0}}},
    {"weibull-log-power", {{"theta", 2.0}, {"sv-power", 1.0}}},
    {"weibull-log-power", {{"theta", 0.5}, {"sv-power", 2.0}}},
    {"weibull-log-power", {{"theta", 2.0}, {"sv-power", -1.0}}},
    {"weibull-inv-log", {{"theta", 2.0}}},
    {"extended-weibull", {}},
};

}  // namespace

TEST_CASE("cumulative hazard examples") {
  CHECK(weibull(2.0).cumulative_hazard(4.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(weibull(0.5).cumulative_hazard(3.0) == doctest::Approx(9.0).epsilon(1e-15));
  auto log_model = make_model("weibull-log-power", {{"theta", 2.0}, {"sv-power", 1.0}});
  CHECK(log_model.cumulative_hazard(std::exp(4.0)) == doctest::Approx(4.0 * std::exp(2.0)).epsilon(1e-14));
  CHECK(code_of([&] { log_model.cumulative_hazard(1.0); }) == ErrorCode::below_support);
}

TEST_CASE("cumulative hazard inverse") {
  CHECK(weibull(2.0).cumulative_hazard_inverse(5.0) == doctest::Approx(25.0).epsilon(1e-15));
  CHECK(weibull(0.5).cumulative_hazard_inverse(9.0) == doctest::Approx(3.0).epsilon(1e-15));
  auto log_model = make_model("weibull-log-power", {{"theta", 2.0}, {"sv-power", 1.0}});
  CHECK(rel(log_model.cumulative_hazard_inverse(4.0 * std::exp(2.0)), std::exp(4.0)) < 1e-10);
  CHECK(code_of([&] { log_model.cumulative_hazard_inverse(0.5); }) == ErrorCode::below_range);

  for (double theta : {0.25, 0.5, 2.0, 4.0}) {
    auto m = make_model("pure-weibull", {{"theta", theta}, {"lambda", 1.7}});
    for (double y : {0.5, 3.0, 40.0, 700.0}) {
      CHECK(rel(m.cumulative_hazard_inverse_by_root(y), m.cumulative_hazard_inverse(y)) < 1e-12);
    }
  }
}

TEST_CASE("round trip H^-1(H(x)) for every tail_exp built-in") {
  for (const auto& [name, params] : kTailExpBuiltins) {
    auto m = make_model(name, params);
    INFO(m.label());
    for (double x = m.support_lower() + 1.0; x <= 1e10; x *= 3.7) {
      CHECK(rel(m.cumulative_hazard_inverse(m.cumulative_hazard(x)), x) < 1e-10);
    }
  }
}

TEST_CASE("hazard jet matches finite differences") {
  for (const auto& [name, params] : kTailExpBuiltins) {
    auto m = make_model(name, params);
    INFO(m.label());
    const double x = std::max(50.0, 4.0 * m.support_lower());
    const auto jet = m.cumulative_hazard_jet(x);
    numerics::RealFn h = [&](double v) { return m.cumulative_hazard(v); };
    for (int j = 1; j <= 4; ++j) {
      const double numeric = numerics::derivative(h, x, j).value;
      CHECK(std::abs(jet[j] - numeric) <= 1e-5 * std::abs(jet[0]) / std::pow(x, j));
    }
  }
}

TEST_CASE("cdf examples") {
  auto expo = weibull(1.0);
  CHECK(expo.cdf(std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(expo.log_cdf(std::log(2.0)) == doctest::Approx(-std::log(2.0)).epsilon(1e-15));
  auto gumbel = make_model("gumbel-fixture");
  CHECK(gumbel.cdf(0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(gumbel.log_neg_log_cdf(3.0) == -3.0);
  auto normal = make_model("normal");
  CHECK(normal.cdf(0.0) == 0.5);
  CHECK(normal.evaluation_lower() == -INFINITY);
  CHECK(make_model("logistic").cdf(0.0) == 0.5);
  CHECK(make_model("gamma", {{"shape", 1.0}}).cdf(2.0) == doctest::Approx(-std::expm1(-2.0)).epsilon(1e-14));
  CHECK(weibull(2.0).cdf(-1.0) == 0.0);
  CHECK(weibull(2.0).log_cdf(-1.0) == -INFINITY);
}

TEST_CASE("density is the derivative of the cdf") {
  for (const char* name : {"pure-weibull", "lcc-weibull", "normal", "logistic", "gamma", "extended-weibull"}) {
    auto m = make_model(name);
    INFO(name);
    const double x = std::max(3.0, 2.0 * m.support_lower());
    numerics::RealFn F = [&](double v) { return m.cdf(v); };
    CHECK(m.density(x) == doctest::Approx(numerics::derivative(F, x, 1).value).epsilon(1e-7));
  }
}

TEST_CASE("classical tails in log space") {
  const auto normal = classical::normal();
  // 50-digit references (tests/oracles)
  CHECK(normal.log_survival(40.0) == doctest::Approx(-804.60844201375378817).epsilon(1e-14));
  CHECK(std::exp(normal.log_hazard(40.0)) == doctest::Approx(40.024968847207263723).epsilon(1e-14));
  for (double x = 4.0; x < 8.0; x += 0.25) {
    const double direct = std::log(0.5 * std::erfc(x / std::sqrt(2.0)));
    CHECK(normal.log_survival(x) == doctest::Approx(direct).epsilon(1e-13));
  }
  const auto gamma = classical::gamma(2.5);
  for (double x : {0.3, 3.4, 3.6, 10.0, 30.0, 200.0}) {
    CHECK(gamma.log_survival(x) == doctest::Approx(std::log(boost::math::gamma_q(2.5, x))).epsilon(1e-13));
  }
  // seam at shape + 1 between the incomplete-gamma and continued-fraction branches
  CHECK(gamma.log_survival(3.5 - 1e-9) == doctest::Approx(gamma.log_survival(3.5 + 1e-9)).epsilon(1e-8));
  CHECK(gamma.log_hazard(3.5 - 1e-9) == doctest::Approx(gamma.log_hazard(3.5 + 1e-9)).epsilon(1e-8));
  // Gamma(1) is the exponential
  const auto g1 = classical::gamma(1.0);
  for (double x : {0.5, 5.0, 50.0, 500.0}) {
    CHECK(g1.log_survival(x) == doctest::Approx(-x).epsilon(1e-13));
    CHECK(std::abs(g1.log_hazard(x)) < 1e-13);
  }
}

TEST_CASE("k function") {
  auto gumbel = make_model("gumbel-fixture");
  for (double x : {-2.0, 0.0, 5.0, 100.0}) {
    if (x < gumbel.support_lower()) continue;
    CHECK(gumbel.k_function(x) == 1.0);
  }
  const auto jet = gumbel.k_jet(3.0);
  CHECK(jet.values[1] == 0.0);
  CHECK(jet.values[2] == 0.0);
  CHECK(jet.values[3] == 0.0);

  CHECK(weibull(1.0).k_function(5.0) == doctest::Approx(1.0033880055734658292).epsilon(1e-14));
  CHECK(make_model("exponential").k_function(5.0) == doctest::Approx(1.0033880055734658292).epsilon(1e-14));

  auto w2 = weibull(2.0);
  CHECK(rel(w2.k_function(1e6), 5e-4) < 1e-6);
  CHECK(rel(w2.k_derivative(1e6, 1).value, -2.5e-10) < 1e-4);
}

TEST_CASE("analytic k jets against high-precision references") {
  struct Case {
    WeibullTypeModel model;
    double x;
    std::array<double, 4> expected;
  };
  const std::vector<Case> cases = {
      {weibull(4.0), 100.0,
       {0.0080791512863269448759, -6.201537103688660366e-5, 1.1044466813428229851e-6, -3.0799429085964195515e-8}},
      {weibull(2.0), 30.0,
       {0.091478592013022416158, -0.001542185749951995776, 7.8721903195891549875e-5, -6.7363042947609377152e-6}},
      {make_model("weibull-log-power", {{"theta", 2.0}, {"sv-power", 1.0}}), 50.0,
       {0.41804315576711412335, -0.0027662179953820601307, 6.8844404272272389275e-5, -3.0179561593217849099e-6}},
      {make_model("extended-weibull", {{"beta", 0.5}, {"delta", 1.0}}), 40.0,
       {0.056117778928042588659, -0.00049561088368439935572, 1.5654252501209133475e-5, -8.1981965897533716348e-7}},
  };
  for (const auto& c : cases) {
    INFO(c.model.label());
    const auto jet = c.model.k_jet(c.x);
    CHECK(jet.path == DerivativePath::analytic);
    for (int j = 0; j < 4; ++j) CHECK(jet.values[j] == doctest::Approx(c.expected[j]).epsilon(1e-12));
  }
}

TEST_CASE("analytic and numeric k derivatives agree") {
  for (const auto& [name, params] : kTailExpBuiltins) {
    auto m = make_model(name, params);
    INFO(m.label());
    for (double x : {1e2, 1e4, 1e6}) {
      if (x < m.support_lower()) continue;
      INFO(x);
      const double k = m.k_function(x);
      for (int order = 1; order <= 2; ++order) {
        const double a = m.k_derivative(x, order, DerivativePath::analytic).value;
        const auto n = m.k_derivative(x, order, DerivativePath::numeric);
        CHECK(n.path == DerivativePath::numeric);
        // relative to the natural scale k/x^order, since k'' can vanish to leading order
        const double scale = std::max(std::abs(a), std::abs(k) / std::pow(x, order));
        CHECK(std::abs(a - n.value) / scale < (order == 1 ? 1e-6 : 1e-4));
      }
    }
  }
}

TEST_CASE("classical models only offer the numeric path") {
  auto normal = make_model("normal");
  CHECK_FALSE(normal.has_analytic_k_derivatives());
  CHECK(normal.k_derivative(3.0, 1).path == DerivativePath::numeric);
  CHECK(code_of([&] { normal.k_derivative(3.0, 1, DerivativePath::analytic); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { normal.k_function(-40.0); }) == ErrorCode::tail_underflow);
  CHECK(code_of([&] { weibull(2.0).k_derivative(10.0, 4); }) == ErrorCode::invalid_argument);
}

TEST_CASE("k approaches H' with exponentially small error") {
  for (const auto& [name, params] : kTailExpBuiltins) {
    auto m = make_model(name, params);
    INFO(m.label());
    for (double x = std::max(2.0, m.support_lower()); x < 1e12; x *= 1.9) {
      const auto h = m.cumulative_hazard_jet(x);
      if (h[0] < 5.0) continue;
      CHECK(std::abs(m.k_function(x) / h[1] - 1.0) <= 10.0 * std::exp(-h[0]));
    }
  }
}

TEST_CASE("regular variation ratios") {
  const auto r2 = weibull(2.0).rv_ratios(1e8);
  CHECK(rel(r2.r1, -0.5) < 0.01);
  CHECK(rel(r2.r2, 0.75) < 0.01);
  CHECK(rel(r2.r3, -15.0 / 8.0) < 0.01);

  const auto r_half = weibull(0.5).rv_ratios(1e8);
  CHECK(rel(r_half.r1, 1.0) < 0.01);
  CHECK(std::abs(r_half.r2) < 0.02);
  CHECK(std::abs(r_half.r3) < 0.02);

  const auto rg = make_model("gumbel-fixture").rv_ratios(10.0);
  CHECK(rg.r1 == 0.0);
  CHECK(rg.r2 == 0.0);
  CHECK(rg.r3 == 0.0);

  for (double theta : {0.25, 2.0, 4.0}) {
    const double a = 1.0 / theta;
    const auto r = weibull(theta).rv_ratios(1e10);
    INFO(theta);
    CHECK(rel(r.r1, a - 1.0) < 5e-3);
    CHECK(rel(r.r2, (a - 2.0) * (a - 1.0)) < 5e-3);
    CHECK(rel(r.r3, (a - 3.0) * (a - 2.0) * (a - 1.0)) < 5e-3);
  }
  // theta = 1/2 has vanishing r2, r3 limits; their size is checked absolutely
  const auto r = weibull(0.5).rv_ratios(1e10);
  CHECK(rel(r.r1, 1.0) < 5e-3);
  CHECK(std::abs(r.r2) < 5e-3);
  CHECK(std::abs(r.r3) < 5e-3);
}

TEST_CASE("normal theta diagnostic from numeric k") {
  auto normal = make_model("normal");
  double previous = 0.0;
  for (double x : {5.0, 10.0, 20.0, 30.0}) {
    const double index = 1.0 + normal.rv_ratios(x).r1;  // -> 1/theta
    CHECK(std::abs(index - 2.0) < std::abs(previous - 2.0) + 1e-3);
    previous = index;
  }
  CHECK(1.0 / previous == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("gev examples") {
  CHECK(gev_cdf({0.0, 0.0}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(gev_density({0.0, 0.0}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(gev_cdf({1.0, 0.0}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(std::abs(gev_cdf({1e-12, 1.0}) - std::exp(-std::exp(-1.0))) < 1e-10);
  CHECK(code_of([] { gev_cdf({1.0, -2.0}); }) == ErrorCode::outside_support);
  CHECK(code_of([] { gev_density({-0.5, 3.0}); }) == ErrorCode::outside_support);
}

TEST_CASE("gev monotone in x and continuous across gamma = 0") {
  for (int i = 0; i < 100; ++i) {
    const double gamma = -0.5 + i / 99.0;
    double previous = 0.0;
    for (int j = 0; j < 100; ++j) {
      const double x = -1.9 + 5.8 * j / 99.0;
      if (!in_gev_support({gamma, x})) continue;
      const double g = gev_cdf({gamma, x});
      CHECK(g >= previous);
      previous = g;
    }
  }
  for (int j = 0; j < 100; ++j) {
    const double x = -3.0 + 9.0 * j / 99.0;
    const double g0 = gev_cdf({0.0, x});
    for (double gamma : {1e-13, -1e-13, 1e-9, -1e-9, 2e-8, -2e-8}) {
      CHECK(std::abs(gev_cdf({gamma, x}) - g0) < 1e2 * std::abs(gamma) + 1e-14);
      CHECK(std::abs(gev_density({gamma, x}) - gev_density({0.0, x})) < 1e2 * std::abs(gamma) + 1e-14);
    }
  }
}

TEST_CASE("density of gev integrates its cdf") {
  for (double gamma : {-0.3, 0.0, 0.4}) {
    numerics::RealFn G = [gamma](double x) { return gev_cdf({gamma, x}); };
    for (double x : {-1.0, 0.0, 1.5}) {
      CHECK(gev_density({gamma, x}) == doctest::Approx(numerics::derivative(G, x, 1).value).epsilon(1e-8));
    }
  }
}

TEST_CASE("catalog") {
  CHECK(catalog().size() == 10);
  CHECK(code_of([] { make_model("cauchy"); }) == ErrorCode::unknown_model);
  CHECK(code_of([] { make_model("normal", {{"theta", 2.0}}); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { make_model("pure-weibull", {{"theta", 2.0}, {"alpha", 2.0}}); }) ==
        ErrorCode::invalid_argument);
  CHECK(code_of([] { make_model("pure-weibull", {{"theta", -1.0}}); }) == ErrorCode::invalid_argument);
  CHECK(make_model("pure-weibull", {{"alpha", 4.0}}).theta() == 0.25);
  CHECK(make_model("normal").theta() == 0.5);
  for (const char* name : {"exponential", "logistic", "gamma"}) CHECK(make_model(name).theta_is_one());
  CHECK_FALSE(make_model("normal").theta_is_one());
  // lambda scales x: H(lambda) = 1
  CHECK(make_model("pure-weibull", {{"theta", 0.5}, {"lambda", 3.0}}).cumulative_hazard(3.0) ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("tail region starts where H is increasing") {
  auto m = make_model("weibull-log-power", {{"theta", 4.0}, {"sv-power", -1.0}});
  const double lo = m.support_lower();
  const double a = 0.25;
  const double x_over_l = 1.0 / std::log(lo);
  CHECK(a - x_over_l > 0.5 * a);
  numerics::RealFn h = [&](double v) { return m.cumulative_hazard(v); };
  double previous = 0.0;
  for (double x = lo; x < 1e12; x *= 1.3) {
    const double hx = h(x);
    CHECK(hx > previous);
    previous = hx;
  }
}
