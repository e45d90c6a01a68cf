#include "polya/reference_laws.hpp"

#include <cmath>

#include "polya/errors.hpp"
#include "polya/special_functions.hpp"

namespace polya {

double DeterministicLimit::sample(Rng& rng) const {
  const double kd = static_cast<double>(k);
  const double g = rng.gamma(w / (kd + 1.0));
  return std::pow(g * (kd + 1.0) * m / w, 1.0 / (kd + 1.0));
}

DeterministicLimit deterministic_limit(double w, int k, double m_k_plus_1) {
  if (!(w >= 1.0)) throw DomainError("need w >= 1");
  if (k < 1) throw DomainError("need gap length k >= 1");
  if (!(m_k_plus_1 > 0.0)) throw DomainError("need a positive limiting moment");
  PolynomialCoefficients coeffs;
  coeffs.a.assign(static_cast<size_t>(k) + 1, 0.0);
  coeffs.a.back() = 1.0 / m_k_plus_1;
  return DeterministicLimit{w, k, m_k_plus_1, ULSpec(w, std::move(coeffs))};
}

namespace {

void check_bernoulli_args(double w, double a1, double a2) {
  if (!(w >= 1.0)) throw DomainError("need w >= 1");
  if (!(a1 > 0.0) || !(a2 > 0.0)) throw DomainError("need a1 > 0 and a2 > 0");
}

}  // namespace

BernoulliMoments bernoulli_moments(double w, double a1, double a2) {
  check_bernoulli_args(w, a1, a2);
  const double z = w * a1 * a1 / (2.0 * a2);
  const double u_base = kummer_u(w / 2.0, 0.5, z);
  BernoulliMoments m;
  m.ez = (w * a1 / (2.0 * a2)) * kummer_u(w / 2.0 + 1.0, 1.5, z) / u_base;
  m.ez2 = ((1.0 + w) / (2.0 * a2)) * kummer_u(w / 2.0 + 1.0, 0.5, z) / u_base;
  return m;
}

std::pair<double, double> bernoulli_pi_from_a(double w, double a1, double a2) {
  check_bernoulli_args(w, a1, a2);
  const double z = w * a1 * a1 / (2.0 * a2);
  const double direct =
      z * kummer_u(w / 2.0 + 1.0, 1.5, z) / kummer_u(w / 2.0, 0.5, z);
  const double via_identity =
      kummer_u((w + 1.0) / 2.0, 0.5, z) / kummer_u((w + 1.0) / 2.0, 1.5, z);
  if (std::abs(direct - via_identity) > 1e-8 * std::max(1.0, std::abs(direct)))
    throw InternalInconsistency("the two gap-probability expressions disagree");
  return {direct, 1.0 - direct};
}

double PowerLawReference::moment(int j) const {
  if (j < 0) throw DomainError("moment order must be >= 0");
  const double g = w * (beta + 1.0);
  const double jd = static_cast<double>(j);
  return std::exp(jd * std::log(alpha) + log_gamma(g + 1.0) + log_gamma(w + jd) -
                  log_gamma(w) - log_gamma(g + jd + 1.0));
}

double PowerLawReference::sample(Rng& rng) const {
  return alpha * rng.beta(w, w * beta + 1.0);
}

PowerLawReference powerlaw_reference(double alpha, double beta, double w) {
  if (!(w >= 1.0)) throw DomainError("need w >= 1");
  return PowerLawReference{alpha, beta, w, InterArrival::power_law(alpha, beta, w)};
}

namespace {

// Central five-point fourth difference of -log erfc, one Richardson step.
double erfc_fourth_derivative() {
  auto g = [](double x) { return -std::log(std::erfc(x)); };
  auto stencil = [&](double h) {
    return (g(-2.0 * h) - 4.0 * g(-h) + 6.0 * g(0.0) - 4.0 * g(h) + g(2.0 * h)) / (h * h * h * h);
  };
  const double d_h = stencil(1e-2);
  const double d_half = stencil(5e-3);
  return (16.0 * d_half - d_h) / 15.0;
}

}  // namespace

NonClosureReport non_closure_checks() {
  NonClosureReport rep;
  for (const double x : {1e-2, 1e-3, 1e-4}) {
    NonClosureReport::LogRatio row;
    row.x = x;
    row.density = exp_integral_e1(x);  // density of U*Exp(1) at x
    row.ratio = row.density / (-std::log(x));
    rep.density_ratios.push_back(row);
  }
  const double pi = 3.14159265358979323846;
  rep.erfc_fourth_log_derivative = erfc_fourth_derivative();
  rep.erfc_reference = 32.0 * (3.0 - pi) / (pi * pi);
  rep.erfc_negative = rep.erfc_fourth_log_derivative < 0.0;
  return rep;
}

}  // namespace polya
