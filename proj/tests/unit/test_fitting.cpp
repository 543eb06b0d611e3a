#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "fieldent/fitting.hpp"

using namespace fieldent;

namespace {
std::vector<std::pair<double, double>> sample(double x0, double x1, int n,
                                              double (*f)(double)) {
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < n; ++i) {
    const double x = x0 * std::pow(x1 / x0, (double)i / (n - 1));
    pts.emplace_back(x, f(x));
  }
  return pts;
}
}  // namespace

TEST_CASE("exact power law", "[fitting]") {
  auto pts = sample(1.0, 100.0, 12, [](double x) { return 7.0 * std::pow(x, -4.0); });
  auto fit = fit_power_law(pts);
  CHECK(fit.exponent == Catch::Approx(-4.0).margin(1e-9));
  CHECK(fit.prefactor == Catch::Approx(7.0).epsilon(1e-8));
  CHECK(fit.r_squared == Catch::Approx(1.0).margin(1e-12));
  CHECK(fit.window.first == Catch::Approx(1.0));
  CHECK(fit.window.second == Catch::Approx(100.0));
}

TEST_CASE("power law with constant offset", "[fitting]") {
  auto pts = sample(1.0, 100.0, 16, [](double x) { return 3.0 + 7.0 * std::pow(x, -4.0); });
  auto fit = fit_power_law(pts, /*estimate_offset=*/true);
  CHECK(fit.exponent == Catch::Approx(-4.0).margin(1e-6));
  REQUIRE(fit.offset.has_value());
  CHECK(*fit.offset == Catch::Approx(3.0).margin(1e-6));
}

TEST_CASE("subleading contamination stays within tolerance", "[fitting]") {
  auto pts = sample(10.0, 100.0, 10,
                    [](double x) { return std::pow(x, -4.0) * (1.0 + 0.1 / x); });
  auto fit = fit_power_law(pts);
  CHECK(fit.exponent == Catch::Approx(-4.0).margin(0.05));
}

TEST_CASE("exponent invariant under abscissa rescaling", "[fitting]") {
  auto pts = sample(1.0, 1000.0, 9, [](double x) { return 2.5 * std::pow(x, -1.7); });
  auto fit1 = fit_power_law(pts);
  for (auto& p : pts) p.first *= 137.0;
  auto fit2 = fit_power_law(pts);
  CHECK(fit1.exponent == Catch::Approx(fit2.exponent).margin(1e-9));
}

TEST_CASE("rejects bad power-law input", "[fitting]") {
  CHECK_THROWS_AS(fit_power_law({{1.0, 1.0}, {2.0, 0.5}}), invalid_state_error);
  CHECK_THROWS_AS(fit_power_law({{-1.0, 1.0}, {2.0, 0.5}, {3.0, 0.2}}), invalid_state_error);
}

TEST_CASE("log-power: exact cubic", "[fitting]") {
  auto pts = sample(1e2, 1e6, 9, [](double L) { return 2.0 * std::pow(std::log(L), 3.0); });
  auto fit = fit_log_power(pts);
  CHECK(fit.exponent == Catch::Approx(3.0).margin(1e-6));
  CHECK(fit.prefactor == Catch::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("log-power: quadratic with offset", "[fitting]") {
  auto pts = sample(1e2, 1e6, 9, [](double L) { return 1.0 + 0.5 * std::pow(std::log(L), 2.0); });
  auto fit = fit_log_power(pts);
  CHECK(fit.exponent == Catch::Approx(2.0).margin(1e-6));
  REQUIRE(fit.offset.has_value());
  CHECK(*fit.offset == Catch::Approx(1.0).margin(1e-4));
}

TEST_CASE("log-power: subleading log term", "[fitting]") {
  auto pts = sample(1e2, 1e6, 9, [](double L) {
    const double x = std::log(L);
    return x * x * x + x;
  });
  auto fit = fit_log_power(pts);
  CHECK(fit.exponent == Catch::Approx(3.0).margin(0.3));
}

TEST_CASE("log-power input validation", "[fitting]") {
  // fewer than three decades
  std::vector<std::pair<double, double>> narrow{{10.0, 1.0}, {20.0, 2.0}, {40.0, 3.0}, {80.0, 4.0}};
  CHECK_THROWS_AS(fit_log_power(narrow), invalid_state_error);
  // degenerate design matrix: all abscissae equal
  std::vector<std::pair<double, double>> degen{{100.0, 1.0}, {100.0, 2.0}, {100.0, 3.0}};
  CHECK_THROWS_AS(fit_log_power(degen), invalid_state_error);
}
