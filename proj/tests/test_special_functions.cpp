#include "doctest.h"

#include <cmath>
#include <numeric>

#include "polya/errors.hpp"
#include "polya/special_functions.hpp"

using namespace polya;

TEST_CASE("log_gamma agrees with the C library") {
  for (double x : {0.1, 0.5, 1.0, 1.5, 2.3, 5.0, 10.7, 41.0, 171.5, 300.0}) {
    const double mine = log_gamma(x);
    const double ref = std::lgamma(x);
    CHECK(std::abs(mine - ref) <= 1e-13 * std::max(1.0, std::abs(ref)));
  }
  CHECK(std::abs(std::exp(log_gamma(0.5)) - std::sqrt(3.14159265358979323846)) < 1e-14);
  for (double x : {0.3, 1.7, 9.2})
    CHECK(std::abs(log_gamma(x + 1.0) - log_gamma(x) - std::log(x)) < 1e-12);
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
  CHECK_THROWS_AS(log_gamma(-2.0), DomainError);
}

TEST_CASE("kummer_u reproduces closed forms") {
  // b = a + 1 collapses to a pure power.
  for (double a : {0.5, 1.0, 2.5})
    for (double z : {0.2, 1.0, 7.0}) {
      const double mine = kummer_u(a, a + 1.0, z);
      const double ref = std::pow(z, -a);
      CHECK(std::abs(mine - ref) < 1e-9 * ref);
    }
  // (a, b) = (1, 1) ties the function to the exponential integral.
  for (double z : {0.1, 1.0, 5.0, 30.0}) {
    const double mine = kummer_u(1.0, 1.0, z);
    const double ref = std::exp(z) * exp_integral_e1(z);
    CHECK(std::abs(mine - ref) < 1e-9 * ref);
  }
  // (1/2, 1/2) ties it to the complementary error function.
  for (double z : {0.25, 1.0, 4.0}) {
    const double mine = kummer_u(0.5, 0.5, z);
    const double ref = std::sqrt(3.14159265358979323846) * std::exp(z) * std::erfc(std::sqrt(z));
    CHECK(std::abs(mine - ref) < 1e-9 * ref);
  }
}

TEST_CASE("kummer_u index-shift identity holds on a grid") {
  // u(a,b,z) = z^(1-b) u(a-b+1, 2-b, z); both sides stay in the a > 0 domain.
  for (double a : {1.0, 1.75, 2.5})
    for (double b : {0.25, 0.5, 1.25})
      for (double z : {0.3, 1.0, 3.0}) {
        const double lhs = kummer_u(a, b, z);
        const double rhs = std::pow(z, 1.0 - b) * kummer_u(a - b + 1.0, 2.0 - b, z);
        CHECK(std::abs(lhs - rhs) < 1e-8 * std::max(lhs, rhs));
      }
  CHECK_THROWS_AS(kummer_u(0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(kummer_u(1.0, 1.0, 0.0), DomainError);
}

TEST_CASE("exp_integral_e1 matches its known value and small-z expansion") {
  CHECK(std::abs(exp_integral_e1(1.0) - 0.21938393439552026) < 1e-12);
  const double euler = 0.57721566490153286;
  CHECK(std::abs(exp_integral_e1(1e-8) + std::log(1e-8) + euler) < 1e-7);
  CHECK(exp_integral_e1(0.5) > exp_integral_e1(1.0));
  CHECK(exp_integral_e1(1.0) > exp_integral_e1(2.0));
  CHECK_THROWS_AS(exp_integral_e1(0.0), DomainError);
}

TEST_CASE("rising-factorial expansion rows are exact") {
  CHECK(stirling_first_row(0) == std::vector<int64_t>{1});
  CHECK(stirling_first_row(1) == std::vector<int64_t>{0, 1});
  // x(x+1)(x+2)(x+3) = 6x + 11x^2 + 6x^3 + x^4.
  CHECK(stirling_first_row(4) == std::vector<int64_t>{0, 6, 11, 6, 1});
  for (int k : {2, 7, 13, 20}) {
    const auto row = stirling_first_row(k);
    REQUIRE(row.size() == static_cast<size_t>(k) + 1);
    long double fact = 1.0L;
    for (int i = 2; i <= k; ++i) fact *= i;
    const long double sum = std::accumulate(row.begin(), row.end(), 0.0L);
    CHECK(sum == fact);  // coefficients of x(x+1)...(x+k-1) at x = 1
  }
  CHECK_THROWS_AS(stirling_first_row(21), OverflowError);
  CHECK_THROWS_AS(stirling_first_row(-1), DomainError);
}
