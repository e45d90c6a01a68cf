#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "polya/errors.hpp"
#include "polya/rng.hpp"
#include "polya/stats.hpp"

using namespace polya;

TEST_CASE("empirical moments match hand values") {
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  const auto ms = empirical_moments(xs, 2);
  REQUIRE(ms.size() == 2);
  CHECK(ms[0].k == 1);
  CHECK(ms[0].mean == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(ms[0].std_error == doctest::Approx(std::sqrt(1.25 / 4.0)).epsilon(1e-12));
  CHECK(ms[1].mean == doctest::Approx(7.5).epsilon(1e-15));
  CHECK_THROWS_AS(empirical_moments({}, 1), EmptyBatch);
  CHECK_THROWS_AS(empirical_moments(xs, 0), DomainError);
}

TEST_CASE("two-sample distance on interleaved points is exact") {
  const auto r = ks_two_sample({1.0, 2.0, 3.0}, {1.5, 2.5, 3.5});
  CHECK(r.statistic == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(r.n1 == 3);
  CHECK(r.n2 == 3);
}

TEST_CASE("two-sample distance is zero for identical samples and one for disjoint ones") {
  const std::vector<double> a{0.1, 0.7, 0.4, 0.9};
  CHECK(ks_two_sample(a, a).statistic == 0.0);
  const auto r = ks_two_sample({1.0, 2.0}, {10.0, 11.0});
  CHECK(r.statistic == 1.0);
  CHECK(r.p_value < 0.2);
  CHECK_THROWS_AS(ks_two_sample({}, a), EmptyBatch);
}

TEST_CASE("one-sample distance against a cdf is exact for a single point") {
  const auto r = ks_vs_cdf({0.5}, [](double x) { return x; });
  CHECK(r.statistic == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("same-law samples pass and shifted ones fail") {
  Rng rng(5150);
  std::vector<double> a(20000), b(20000), c(20000);
  for (auto& x : a) x = rng.uniform();
  for (auto& x : b) x = rng.uniform();
  for (auto& x : c) x = rng.uniform() + 0.05;
  const auto same = ks_two_sample(a, b);
  CHECK(same.p_value > 1e-3);
  const auto shifted = ks_two_sample(a, c);
  CHECK(shifted.statistic > 0.03);
  CHECK(shifted.p_value < 1e-6);
  const auto exact = ks_vs_cdf(a, [](double x) { return std::clamp(x, 0.0, 1.0); });
  CHECK(exact.p_value > 1e-3);
}

TEST_CASE("kolmogorov tail matches tabulated points") {
  CHECK(kolmogorov_tail(0.0) == 1.0);
  CHECK(kolmogorov_tail(-1.0) == 1.0);
  // Classic 5% and 1% critical points of the limiting law.
  CHECK(std::abs(kolmogorov_tail(1.358) - 0.05) < 2e-3);
  CHECK(std::abs(kolmogorov_tail(1.628) - 0.01) < 5e-4);
  CHECK(kolmogorov_tail(6.0) < 1e-20);
  CHECK(kolmogorov_tail(0.5) > kolmogorov_tail(0.9));
}

TEST_CASE("jitter breaks ties without moving values") {
  std::vector<double> xs(1000, 2.0);
  Rng rng(9);
  jitter_batch(xs, rng);
  std::sort(xs.begin(), xs.end());
  CHECK(std::adjacent_find(xs.begin(), xs.end()) == xs.end());
  for (double x : xs) CHECK(std::abs(x - 2.0) <= 1e-9);
  std::vector<double> empty;
  jitter_batch(empty, rng);  // no-op, must not throw
  CHECK(empty.empty());
}
