#include <cmath>

#include "doctest.h"
#include "penult/error.hpp"
#include "penult/slowly_varying.hpp"

using namespace penult;

namespace {

std::vector<double> decades(int from, int to) {
  std::vector<double> grid;
  for (int j = from; j <= to; ++j) grid.push_back(std::pow(10.0, j));
  return grid;
}

// 2 + sin(log x)/log x, analytic first derivative only
SlowlyVaryingSpec oscillating() {
  auto spec = numeric_only("2+sin(log x)/log x", std::exp(1.0), [](double x) {
    const double s = std::log(x);
    return 2.0 + std::sin(s) / s;
  });
  spec.derivatives[0] = [](double x) {
    const double s = std::log(x);
    return (std::cos(s) / s - std::sin(s) / (s * s)) / x;
  };
  return spec;
}

}  // namespace

TEST_CASE("sv_ratio closed forms") {
  auto c = sv::constant(3.5);
  for (int j = 1; j <= 4; ++j) CHECK(sv_ratio(c, j, 10.0) == 0.0);

  auto l = sv::log_power(1.0);
  CHECK(sv_ratio(l, 1, std::exp(10.0)) == doctest::Approx(0.1).epsilon(1e-14));
  // x^j l^(j)/l for log x is (j-1)! (-1)^(j-1) / log x
  const double x = 1e7;
  const double s = std::log(x);
  CHECK(sv_ratio(l, 2, x) == doctest::Approx(-1.0 / s).epsilon(1e-13));
  CHECK(sv_ratio(l, 3, x) == doctest::Approx(2.0 / s).epsilon(1e-13));
  CHECK(sv_ratio(l, 4, x) == doctest::Approx(-6.0 / s).epsilon(1e-13));
}

TEST_CASE("sv_ratio numeric path against analytic and high-precision reference") {
  auto spec = oscillating();
  const double analytic = sv_ratio(spec, 1, 1e6);
  // 50-digit reference (tests/oracles)
  CHECK(analytic == doctest::Approx(0.0086588728296164657172).epsilon(1e-13));
  const double numeric = 1e6 * spec.numeric_derivative(1, 1e6) / spec.value(1e6);
  CHECK(std::abs(numeric - analytic) < 1e-8);
}

TEST_CASE("sv_ratio errors") {
  auto l = sv::log_power(1.0);
  try {
    sv_ratio(l, 1, 1.0);
    FAIL("expected domain_error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::domain_error);
  }
  auto bad = numeric_only("negative", 0.0, [](double) { return -1.0; });
  CHECK_THROWS_AS(sv_ratio(bad, 1, 5.0), Error);
  CHECK_THROWS_AS(sv_ratio(l, 5, 100.0), Error);
}

TEST_CASE("check_sv_conditions verdicts") {
  auto grid = decades(2, 8);
  auto c = check_sv_conditions(sv::constant(2.0), grid);
  for (int j = 0; j < 4; ++j) {
    CHECK(c.verdicts[j] == SvVerdict::decaying);
    for (double r : c.ratios[j]) CHECK(r == 0.0);
  }

  auto log_report = check_sv_conditions(sv::log_power(1.0), grid);
  CHECK(log_report.verdicts[0] == SvVerdict::decaying);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(log_report.ratios[0][i] == doctest::Approx(1.0 / std::log(grid[i])).epsilon(1e-13));
  }

  auto power = from_log_scale("x^0.1", 1.0, [](double s) {
    std::array<double, 5> g{};
    for (int m = 0; m < 5; ++m) g[m] = std::pow(0.1, m) * std::exp(0.1 * s);
    return g;
  });
  auto p = check_sv_conditions(power, grid);
  CHECK(p.verdicts[0] == SvVerdict::not_confirmed);
  for (double r : p.ratios[0]) CHECK(r == doctest::Approx(0.1).epsilon(1e-12));

  CHECK_THROWS_AS(check_sv_conditions(sv::constant(1.0), {1e2, 1e3, 1e4}), Error);
  CHECK_THROWS_AS(check_sv_conditions(sv::constant(1.0), {1e2, 2e2, 3e2, 4e2}), Error);
}

TEST_CASE("built-in slowly varying functions are slowly varying") {
  for (const auto& spec : sv::builtins()) {
    INFO(spec.label);
    double previous = HUGE_VAL;
    for (int j = 2; j <= 8; ++j) {
      const double t = std::pow(10.0, j);
      const double gap = std::abs(spec.value(2.0 * t) / spec.value(t) - 1.0);
      CHECK(gap <= previous);
      previous = gap;
    }
  }
}

TEST_CASE("built-in ratio sequences shrink along 1e2..1e10") {
  auto grid = decades(2, 10);
  for (const auto& spec : sv::builtins()) {
    INFO(spec.label);
    for (int j = 1; j <= 4; ++j) {
      std::vector<double> mags;
      for (double t : grid) mags.push_back(std::abs(sv_ratio(spec, j, t)));
      // monotone non-increasing from the third point on
      for (std::size_t i = 3; i < mags.size(); ++i) CHECK(mags[i] <= mags[i - 1]);
    }
  }
}

TEST_CASE("terminal ratio size at 1e10") {
  // Ratios built from log x alone decay like c_j / log x; only l whose
  // variation is O(1/log^2 x) or smaller gets below 0.05 by 1e10.
  for (const auto& spec : {sv::constant(1.0), sv::constant_plus_inverse_log(1.0, 1.0)}) {
    for (int j = 1; j <= 4; ++j) CHECK(std::abs(sv_ratio(spec, j, 1e10)) < 0.05);
  }
  const double s = std::log(1e10);
  const double falling_one[4] = {1.0, -1.0, 2.0, -6.0};
  auto l1 = sv::log_power(1.0);
  for (int j = 1; j <= 4; ++j) CHECK(sv_ratio(l1, j, 1e10) == doctest::Approx(falling_one[j - 1] / s).epsilon(1e-12));
  // (log x)^2: x l'/l = 2/log x
  CHECK(sv_ratio(sv::log_power(2.0), 1, 1e10) == doctest::Approx(2.0 / s).epsilon(1e-12));
}

TEST_CASE("analytic and numeric derivative paths agree") {
  for (const auto& spec : sv::builtins()) {
    if (spec.is_constant) continue;
    for (double x : {1e2, 1e4, 1e6, 1e8}) {
      for (int j = 1; j <= 4; ++j) {
        INFO(spec.label, " x=", x, " j=", j);
        const double analytic = spec.derivative(j, x);
        const double numeric = spec.numeric_derivative(j, x);
        const double tol = j <= 3 ? 1e-7 : 1e-5;
        CHECK(std::abs(numeric - analytic) <= tol * std::abs(analytic));
      }
    }
  }
}
