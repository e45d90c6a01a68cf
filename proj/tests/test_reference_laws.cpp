#include "doctest.h"

#include <cmath>
#include <vector>

#include "polya/errors.hpp"
#include "polya/reference_laws.hpp"
#include "polya/special_functions.hpp"
#include "polya/rng.hpp"
#include "polya/stats.hpp"

using namespace polya;

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_CASE("constant-gap limit is a rescaled gamma root") {
  const auto lim = deterministic_limit(1.0, 1, 2.0);
  // Z = 2 sqrt(G) with G ~ Gamma(1/2): E Z^2 = 4 E G = 2 recovers m.
  CHECK(lim.spec.moment(2) == doctest::Approx(2.0).epsilon(1e-8));
  Rng rng(55);
  const int n = 100000;
  double sumsq = 0.0;
  std::vector<double> xs;
  xs.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double z = lim.sample(rng);
    sumsq += z * z;
    xs.push_back(z);
  }
  CHECK(std::abs(sumsq / n - 2.0) < 0.1);
  const auto ks = ks_vs_cdf(xs, [&](double x) { return lim.spec.cdf(x); });
  CHECK(ks.p_value > 1e-3);
}

TEST_CASE("constant-gap limit handles higher gap orders") {
  const auto lim = deterministic_limit(1.0, 2, 3.0);
  // Z = (9 G)^{1/3} with G ~ Gamma(1/3): E Z^3 = 9 E G = 3.
  CHECK(lim.spec.moment(3) == doctest::Approx(3.0).epsilon(1e-8));
  Rng rng(56);
  double sum3 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum3 += std::pow(lim.sample(rng), 3.0);
  CHECK(std::abs(sum3 / n - 3.0) < 0.15);
  CHECK_THROWS_AS(deterministic_limit(0.5, 1, 2.0), DomainError);
  CHECK_THROWS_AS(deterministic_limit(1.0, 0, 2.0), DomainError);
  CHECK_THROWS_AS(deterministic_limit(1.0, 1, 0.0), DomainError);
}

TEST_CASE("two-point-gap moments satisfy their linear identity") {
  for (double w : {1.0, 2.0, 3.5})
    for (double a1 : {0.5, 1.0, 2.0})
      for (double a2 : {0.5, 1.0, 1.5}) {
        const auto m = bernoulli_moments(w, a1, a2);
        CHECK(m.ez > 0.0);
        CHECK(m.ez2 > m.ez * m.ez * 0.999);  // Jensen with slack
        CHECK(a1 * m.ez + a2 * m.ez2 == doctest::Approx(1.0).epsilon(1e-8));
      }
}

TEST_CASE("two-point-gap moments agree with direct quadrature") {
  const auto m = bernoulli_moments(2.0, 1.0, 1.0);
  const ULSpec spec(2.0, PolynomialCoefficients{{1.0, 1.0}});
  CHECK(m.ez == doctest::Approx(spec.moment(1)).epsilon(1e-8));
  CHECK(m.ez2 == doctest::Approx(spec.moment(2)).epsilon(1e-8));
}

TEST_CASE("gap probabilities from the moment identities are consistent") {
  const auto [pi0, pi1] = bernoulli_pi_from_a(2.0, 1.0, 1.0);
  CHECK(pi0 + pi1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pi0 > 0.0);
  CHECK(pi1 > 0.0);
  // More zero gaps (relatively larger a1 path) raise pi_0 monotonically.
  double prev = -1.0;
  for (int i = 0; i < 15; ++i) {
    const double a1 = 0.2 + 0.2 * i;
    const auto [p0, p1] = bernoulli_pi_from_a(1.0, a1, 1.0);
    CHECK(p0 > prev);
    prev = p0;
  }
}

TEST_CASE("heavy-tail reference pmf and moments have closed forms") {
  const auto ref = powerlaw_reference(1.0, 1.0, 1.0);
  double head = 0.0;
  for (int64_t j = 0; j <= 200; ++j) head += ref.pi_pmf(j);
  const auto& law = std::get<PowerLawTauLaw>(ref.pi.law());
  CHECK(head + std::exp(law.log_tail(201)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ref.moment(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(ref.mu().is_infinite());
  // Beta(w, w beta + 1) product formula for the j-th moment.
  const auto ref2 = powerlaw_reference(2.0, 1.5, 2.0);
  for (int j = 1; j <= 4; ++j) {
    double prod = 1.0;
    for (int i = 0; i < j; ++i)
      prod *= (ref2.w + i) / (ref2.w + ref2.w * ref2.beta + 1.0 + i);
    prod *= std::pow(ref2.alpha, j);
    CHECK(ref2.moment(j) == doctest::Approx(prod).epsilon(1e-12));
  }
  CHECK(ref2.mu().value() == doctest::Approx(3.0 / 2.0));  // (w+1)/(beta w - 1)
  Rng rng(808);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = ref2.sample(rng);
    REQUIRE(z > 0.0);
    REQUIRE(z < 2.0);
    sum += z;
  }
  CHECK(std::abs(sum / n - ref2.moment(1)) < 4.0 * std::sqrt(ref2.moment(2) / n));
  CHECK_THROWS_AS(powerlaw_reference(1.0, 1.0, 0.5), DomainError);
}

TEST_CASE("near-degenerate heavy tails collapse to the uniform law") {
  const auto ref = powerlaw_reference(1.0, 1e-6, 1.0);
  Rng rng(909);
  std::vector<double> xs(100000);
  for (auto& x : xs) x = ref.sample(rng);
  const auto ks = ks_vs_cdf(xs, [](double x) { return std::clamp(x, 0.0, 1.0); });
  CHECK(ks.statistic < 0.01);
}

TEST_CASE("impossibility probes match their closed forms") {
  const auto rep = non_closure_checks();
  REQUIRE(rep.density_ratios.size() == 3);
  // The U*Exp(1) density at x is E_1(x), far below -log x even at 1e-4.
  for (const auto& row : rep.density_ratios) {
    CHECK(row.ratio < 1.0);
    CHECK(row.ratio > 0.8);
    CHECK(row.density == doctest::Approx(exp_integral_e1(row.x)).epsilon(1e-10));
  }
  CHECK(rep.density_ratios.back().x == doctest::Approx(1e-4));
  CHECK(rep.density_ratios.back().ratio == doctest::Approx(0.937341).epsilon(1e-4));
  const double ref = 32.0 * (3.0 - kPi) / (kPi * kPi);
  CHECK(rep.erfc_reference == doctest::Approx(ref).epsilon(1e-14));
  CHECK(rep.erfc_fourth_log_derivative == doctest::Approx(ref).epsilon(1e-4));
  CHECK(rep.erfc_negative);
}
