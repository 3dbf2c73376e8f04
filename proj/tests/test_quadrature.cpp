#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "entropic/quadrature.hpp"

using namespace entropic;
using std::numbers::pi;

namespace {

struct KnownIntegral {
  const char* name;
  Integrand1D f;
  IntegrationRegion region;
  double exact;
};

std::vector<KnownIntegral> known_integrals() {
  return {
      {"x on [0,1]", [](double x) { return x; }, IntegrationRegion({{0, 1}}), 0.5},
      {"exp(-x^2) on R", [](double x) { return std::exp(-x * x); }, IntegrationRegion({{-kInf, kInf}}),
       std::sqrt(pi)},
      {"log(1/x) on [0,1]", [](double x) { return -std::log(x); }, IntegrationRegion({{0, 1}}), 1.0},
      {"exp(-x) on [0,inf)", [](double x) { return std::exp(-x); }, IntegrationRegion({{0, kInf}}), 1.0},
      {"1/sqrt(x) on [0,1]", [](double x) { return 1.0 / std::sqrt(x); }, IntegrationRegion({{0, 1}}), 2.0},
      {"1/(1+x^2) on R", [](double x) { return 1.0 / (1.0 + x * x); }, IntegrationRegion({{-kInf, kInf}}), pi},
      {"sin on [0,pi]", [](double x) { return std::sin(x); }, IntegrationRegion({{0, pi}}), 2.0},
      {"x^-0.3 on [0,1]", [](double x) { return std::pow(x, -0.3); }, IntegrationRegion({{0, 1}}), 1.0 / 0.7},
      {"1/x^2 on [1,inf)", [](double x) { return 1.0 / (x * x); }, IntegrationRegion({{1, kInf}}), 1.0},
      {"exp(x) on (-inf,0]", [](double x) { return std::exp(x); }, IntegrationRegion({{-kInf, 0}}), 1.0},
      {"sqrt(x) log x on [0,1]", [](double x) { return std::sqrt(x) * std::log(x); },
       IntegrationRegion({{0, 1}}), -4.0 / 9.0},
      {"|x| on [-1,1] split at 0", [](double x) { return std::abs(x); }, IntegrationRegion({{-1, 1}}, {{0.0}}),
       1.0},
  };
}

}  // namespace

TEST_CASE("integrate: worked examples") {
  auto r = integrate([](double x) { return x; }, Interval{0, 1});
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-15));

  r = integrate([](double x) { return std::exp(-x * x); }, Interval{-kInf, kInf});
  CHECK(r.converged);
  CHECK(std::abs(r.value - 1.7724538509055159) < 1e-9);

  r = integrate([](double x) { return -std::log(x); }, IntegrationRegion({{0, 1}}));
  CHECK(r.converged);
  CHECK(std::abs(r.value - 1.0) < 1e-9);
}

TEST_CASE("integrate: error estimate is honest on known integrals") {
  for (const auto& k : known_integrals()) {
    CAPTURE(k.name);
    const auto r = integrate(k.f, k.region, {.tol = 1e-10});
    CHECK(r.converged);
    CHECK(r.error_estimate <= 1e-10);
    CHECK(std::abs(r.value - k.exact) <= 10.0 * r.error_estimate + 1e-14);
  }
}

TEST_CASE("integrate: halving tol never increases the error estimate") {
  for (const auto& k : known_integrals()) {
    CAPTURE(k.name);
    double prev = kInf;
    for (double tol = 1e-4; tol >= 1e-11; tol *= 0.5) {
      const auto r = integrate(k.f, k.region, {.tol = tol});
      REQUIRE(r.converged);
      CHECK(r.error_estimate <= prev);
      prev = r.error_estimate;
    }
  }
}

TEST_CASE("integrate: linearity on a random family") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  std::uniform_real_distribution<double> shape(0.2, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    const double a = coef(rng);
    const double b = coef(rng);
    const double s = shape(rng);
    const double t = shape(rng);
    Integrand1D f = [s](double x) { return std::exp(-s * x * x); };
    Integrand1D g = [t](double x) { return 1.0 / (1.0 + t * x * x); };
    const IntegrationRegion r({{-kInf, kInf}});
    const auto rf = integrate(f, r);
    const auto rg = integrate(g, r);
    const auto rh = integrate([&](double x) { return a * f(x) + b * g(x); }, r);
    REQUIRE(rf.converged);
    REQUIRE(rg.converged);
    REQUIRE(rh.converged);
    const double combined = std::abs(a) * rf.error_estimate + std::abs(b) * rg.error_estimate + rh.error_estimate;
    CHECK(std::abs(rh.value - (a * rf.value + b * rg.value)) <= combined + 1e-14);
  }
}

TEST_CASE("integrate: budget exhaustion is reported, not hidden") {
  // 1/x on (0,1] diverges.
  const auto r = integrate([](double x) { return 1.0 / x; }, Interval{0, 1}, {.tol = 1e-9, .max_intervals = 500});
  CHECK_FALSE(r.converged);
  CHECK(r.subdivisions > 0);
}

TEST_CASE("integrate: empty interval and bad tolerance") {
  const auto r = integrate([](double) { return 1.0; }, Interval{1, 1});
  CHECK(r.value == 0.0);
  CHECK(r.converged);
  CHECK_THROWS_AS((void)integrate([](double) { return 1.0; }, Interval{0, 1}, {.tol = 0.0}),
                  std::invalid_argument);
}

TEST_CASE("IntegrationRegion keeps only interior split points") {
  IntegrationRegion r({{0, 1}}, {{-1.0, 0.0, 0.5, 0.25, 0.5, 1.0, 2.0}});
  REQUIRE(r.splits(0).size() == 2);
  CHECK(r.splits(0)[0] == 0.25);
  CHECK(r.splits(0)[1] == 0.5);
}

TEST_CASE("integrate_nd: worked examples") {
  auto r = integrate_nd([](std::span<const double>) { return 1.0; }, IntegrationRegion({{0, 1}, {0, 1}}));
  CHECK(r.converged);
  CHECK(std::abs(r.value - 1.0) < 1e-12);

  const IntegrationRegion plane({{-kInf, kInf}, {-kInf, kInf}});
  auto gauss2 = [](std::span<const double> x) {
    return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1])) / (2.0 * pi);
  };
  r = integrate_nd(gauss2, plane);
  CHECK(r.converged);
  CHECK(std::abs(r.value - 1.0) < 1e-7);

  r = integrate_nd([&](std::span<const double> x) { return (x[0] * x[0] + x[1] * x[1]) * gauss2(x); }, plane);
  CHECK(r.converged);
  CHECK(std::abs(r.value - 2.0) < 1e-7);
}

TEST_CASE("integrate_nd: three dimensions and the dimension gate") {
  const IntegrationRegion cube({{-kInf, kInf}, {-kInf, kInf}, {-kInf, kInf}});
  const auto r = integrate_nd(
      [](std::span<const double> x) {
        return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])) / std::pow(2.0 * pi, 1.5);
      },
      cube);
  CHECK(r.converged);
  CHECK(std::abs(r.value - 1.0) < 1e-7);

  const IntegrationRegion four({{0, 1}, {0, 1}, {0, 1}, {0, 1}});
  CHECK_THROWS_AS((void)integrate_nd([](std::span<const double>) { return 1.0; }, four), std::invalid_argument);
}

TEST_CASE("xlogx uses 0 log 0 = 0") {
  CHECK(xlogx(0.0) == 0.0);
  CHECK(xlogx(1e-301) == 0.0);
  CHECK(xlogx(1.0) == 0.0);
  CHECK(xlogx(std::numbers::e) == doctest::Approx(std::numbers::e));
}
