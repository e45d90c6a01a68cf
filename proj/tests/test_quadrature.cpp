#include "doctest.h"

#include <cmath>

#include "polya/errors.hpp"
#include "polya/quadrature.hpp"

using namespace polya;

TEST_CASE("polynomials integrate to machine accuracy") {
  const auto r = integrate([](double x) { return x * x; }, 0.0, 1.0, 1e-12);
  CHECK(std::abs(r.value - 1.0 / 3.0) < 1e-12);
  CHECK(r.abs_error <= 1e-12);
  CHECK(r.intervals >= 1);
}

TEST_CASE("relative-tolerance driver handles exponential decay") {
  const auto r = integrate_rel([](double x) { return std::exp(-x); }, 0.0, 40.0, 1e-10);
  CHECK(std::abs(r.value - (1.0 - std::exp(-40.0))) < 1e-10);
}

TEST_CASE("integrable endpoint singularity converges") {
  // Kronrod nodes are interior, so log(1/x) is never evaluated at 0.
  const auto r = integrate([](double x) { return std::log(1.0 / x); }, 0.0, 1.0, 1e-9);
  CHECK(std::abs(r.value - 1.0) < 1e-8);
}

TEST_CASE("oscillatory integrand cancels to zero") {
  const auto r = integrate([](double x) { return std::sin(x); }, 0.0, 2.0 * 3.14159265358979323846,
                           1e-12);
  CHECK(std::abs(r.value) < 1e-11);
}

TEST_CASE("adaptive refinement finds an off-center peak") {
  const double s = 0.05, c = 2.7;
  const auto f = [=](double x) {
    const double t = (x - c) / s;
    return std::exp(-0.5 * t * t);
  };
  const auto r = integrate_rel(f, 0.0, 6.0, 1e-9);
  const double truth = s * std::sqrt(2.0 * 3.14159265358979323846);
  CHECK(std::abs(r.value - truth) < 1e-8 * truth);
  CHECK(r.intervals > 1);
}

TEST_CASE("divergent integrand raises instead of returning garbage") {
  CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-10),
                  QuadratureError);
}
