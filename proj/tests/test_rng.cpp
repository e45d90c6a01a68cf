#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "polya/rng.hpp"

using namespace polya;

TEST_CASE("splitmix64 matches the published test vector") {
  // Reference outputs for state 0, used by the seeding path.
  uint64_t s = 0;
  CHECK(splitmix64_next(s) == 0xE220A8397B1DCDAFull);
  CHECK(splitmix64_next(s) == 0x6E789E6AA1B965F4ull);
  CHECK(splitmix64_next(s) == 0x06C45D188009454Full);
}

TEST_CASE("uniform draws stay strictly inside the unit interval") {
  Rng rng(12345);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  // 4 sigma around 1/2 with sigma = 1/sqrt(12 n).
  CHECK(std::abs(sum / n - 0.5) < 4.0 / std::sqrt(12.0 * n));
}

TEST_CASE("seeding is deterministic and streams are distinct") {
  Rng a = Rng::for_stream(99, 7);
  Rng b = Rng::for_stream(99, 7);
  Rng c = Rng::for_stream(99, 8);
  bool all_equal = true, any_equal_to_c = false;
  for (int i = 0; i < 64; ++i) {
    const double ua = a.uniform(), ub = b.uniform(), uc = c.uniform();
    all_equal = all_equal && (ua == ub);
    any_equal_to_c = any_equal_to_c || (ua == uc);
  }
  CHECK(all_equal);
  CHECK_FALSE(any_equal_to_c);
}

namespace {

struct Running {
  double sum = 0.0, sumsq = 0.0;
  int64_t n = 0;
  void add(double x) {
    sum += x;
    sumsq += x * x;
    ++n;
  }
  double mean() const { return sum / static_cast<double>(n); }
  double var() const { return sumsq / static_cast<double>(n) - mean() * mean(); }
};

}  // namespace

TEST_CASE("exponential and normal sampling match their first two moments") {
  Rng rng(2024);
  Running e, z;
  int inside = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    e.add(rng.exponential());
    const double x = rng.normal();
    z.add(x);
    if (std::abs(x) < 1.959964) ++inside;
  }
  const double tol = 4.0 / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(e.mean() - 1.0) < tol);
  CHECK(std::abs(e.var() - 1.0) < 3.0 * tol);
  CHECK(std::abs(z.mean()) < tol);
  CHECK(std::abs(z.var() - 1.0) < 2.0 * tol);
  const double frac = static_cast<double>(inside) / n;
  CHECK(std::abs(frac - 0.95) < 4.0 * std::sqrt(0.95 * 0.05 / n));
}

TEST_CASE("gamma sampling covers shapes below and above one") {
  Rng rng(77);
  const int n = 200000;
  for (double shape : {0.5, 1.0, 3.7}) {
    Running g;
    for (int i = 0; i < n; ++i) g.add(rng.gamma(shape));
    // Mean and variance of a unit-scale gamma both equal the shape.
    const double se_mean = std::sqrt(shape / n);
    CHECK(std::abs(g.mean() - shape) < 4.0 * se_mean);
    const double kurt_term = shape * (3.0 + 6.0 / shape);  // var of (X-mu)^2 ~ shape*(2+6)
    CHECK(std::abs(g.var() - shape) < 4.0 * std::sqrt((2.0 * shape * shape + kurt_term) / n));
  }
}

TEST_CASE("beta sampling matches its mean and variance") {
  Rng rng(31);
  Running b;
  const int n = 200000;
  for (int i = 0; i < n; ++i) b.add(rng.beta(2.0, 3.0));
  const double mean = 2.0 / 5.0;
  const double var = 2.0 * 3.0 / (25.0 * 6.0);
  CHECK(std::abs(b.mean() - mean) < 4.0 * std::sqrt(var / n));
  CHECK(std::abs(b.var() - var) < 0.01 * var);
}
