#pragma once

#include <cstdint>
#include <vector>

#include "polya/interarrival.hpp"
#include "polya/rng.hpp"
#include "polya/ul.hpp"

namespace polya {

// Closed-form reference laws the numerical machinery is checked against.

// Limit of the urn with a constant gap k: density proportional to
// x^{w-1} exp(-w x^{k+1} / ((k+1) m)), which is a Gamma(w/(k+1)) variable
// rescaled and taken to the power 1/(k+1).
struct DeterministicLimit {
  double w = 1.0;
  int k = 1;
  double m = 1.0;  // limiting (k+1)-th scaled moment of the urn
  ULSpec spec;

  double sample(Rng& rng) const;
};

DeterministicLimit deterministic_limit(double w, int k, double m_k_plus_1);

// Two-point gap laws on {0,1}: the limit density is
// proportional to x^{w-1} exp(-w(a_1 x + a_2 x^2/2)) and its moments and gap
// probabilities have closed forms in the Kummer U function.
struct BernoulliMoments {
  double ez = 0.0;
  double ez2 = 0.0;
};

BernoulliMoments bernoulli_moments(double w, double a1, double a2);

// (pi_0, pi_1); evaluates the two equivalent Kummer-U expressions for pi_0
// and insists they agree to 1e-8.
std::pair<double, double> bernoulli_pi_from_a(double w, double a1, double a2);

// Heavy-tailed gap family: the conjectured limit of the urn is alpha times a
// Beta(w, w beta + 1) variable. Exploratory: for mean gaps above 1 the
// convergence claim is a conjecture, and the Beta identification is
// conjectural throughout; outputs carry that label.
struct PowerLawReference {
  double alpha = 1.0;
  double beta = 1.0;
  double w = 1.0;
  InterArrival pi;

  double pi_pmf(int64_t j) const { return pi.pmf(j); }
  double moment(int j) const;    // E Z^j of the conjectured limit
  double sample(Rng& rng) const; // alpha * Beta(w, w beta + 1)
  MeanValue mu() const { return pi.mean(); }
};

PowerLawReference powerlaw_reference(double alpha, double beta, double w);

// Two impossibility probes: the density of U*Exp(1) blows up only
// logarithmically at 0 (so it cannot have the x^{v-1} shape), and the fourth
// derivative of -log erfc at 0 is negative (so erfc cannot be written with
// non-negative coefficients).
struct NonClosureReport {
  struct LogRatio {
    double x = 0.0;
    double density = 0.0;  // density of U*Exp(1) at x, i.e. the tail integral of e^{-t}/t
    double ratio = 0.0;    // density / (-log x)
  };
  std::vector<LogRatio> density_ratios;   // at x = 1e-2, 1e-3, 1e-4
  double erfc_fourth_log_derivative = 0.0;  // -d^4/dx^4 log erfc(x) at x=0
  double erfc_reference = 0.0;              // 32(3-pi)/pi^2
  bool erfc_negative = false;
};

NonClosureReport non_closure_checks();

}  // namespace polya
