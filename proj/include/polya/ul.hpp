#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "polya/conditional_moments.hpp"
#include "polya/errors.hpp"
#include "polya/interarrival.hpp"
#include "polya/rng.hpp"

namespace polya {

// The limit family: densities u(x) = c x^{v-1} exp(-v Phi(x)) on (0, rho),
// where Phi(x) = sum_k a_k x^k / k and rho is the radius of convergence of
// sum_k a_k x^k. Two coefficient shapes cover everything we need: an explicit
// polynomial a_1..a_K (rho infinite) and the geometric family a_k = beta
// alpha^{-k} (rho = alpha, where the density becomes a scaled Beta).

struct PolynomialCoefficients {
  std::vector<double> a;  // a[i] is the coefficient of x^{i+1}
};

struct GeometricCoefficients {
  double alpha = 1.0;
  double beta = 1.0;
};

using ULCoefficients = std::variant<PolynomialCoefficients, GeometricCoefficients>;

// The weight distribution psi_k = a_k mu_k attached to a spec;
// for geometric coefficients the support is infinite and the tail beyond the
// tabulated head is inverted through its closed form.
class PsiDistribution {
 public:
  bool has_finite_support() const { return finite_; }
  const std::vector<int>& support() const { return ks_; }
  double pmf(int64_t k) const;
  double log_tail(int64_t k) const;  // log P(K >= k), infinite-support case only
  int64_t sample(Rng& rng) const;
  std::vector<std::pair<int, double>> atoms() const;  // finite support only

 private:
  friend PsiDistribution psi_from_ul(const class ULSpec& spec);
  friend PsiDistribution make_finite_psi(std::vector<std::pair<int, double>> atoms);
  bool finite_ = true;
  std::vector<int> ks_;
  std::vector<double> probs_;
  std::vector<double> cum_;
  double v_ = 0.0;      // infinite-support tail parameters
  double vbeta_ = 0.0;
};

class ULSpec {
 public:
  ULSpec(double v, ULCoefficients coefficients);

  double v() const { return v_; }
  double rho() const { return rho_; }  // +infinity for polynomial coefficients
  const ULCoefficients& coefficients() const { return coeffs_; }
  double coefficient(int k) const;  // a_k (0 when k outside the support)
  int max_polynomial_index() const;  // K for polynomial coefficients, 0 otherwise

  double series(double x) const;  // sum_k a_k x^k, for 0 <= x < rho
  double phi(double x) const;     // sum_k a_k x^k / k

  double normalizing_constant() const { return c_; }
  double density(double x) const;  // 0 outside (0, rho)
  double moment(int k) const;      // E Z^k; cached through k=12

  // CDF machinery built once at construction (monotone cubic table over an
  // adaptively refined grid).
  double cdf(double x) const;
  double quantile(double u) const;        // u in (0, 1)
  double upper_support() const;           // right end of the table
  double tail_probability(double x) const;  // P(Z >= x), fresh quadrature

 private:
  void build_cdf_table();
  double moment_integral(int k) const;

  double v_;
  ULCoefficients coeffs_;
  double rho_;
  double c_ = 0.0;
  std::vector<double> moments_;  // mu_0..mu_12
  std::vector<double> grid_x_, grid_f_, grid_d_;  // CDF nodes, values, slopes
};

// mu_k minus the moment recursion (v/(v+k)) sum_l a_l mu_{k+l}. Polynomial
// coefficients vanish beyond K, so that sum is finite and exact; geometric
// ones continue past the cut with a closed-form tail, whose size is reported
// alongside so callers can see how much the reconstruction contributed.
struct ResidualReport {
  double residual = 0.0;
  double tail_bound = 0.0;
};
ResidualReport moment_recursion_residual(const ULSpec& spec, int k, int truncation = 0);

PsiDistribution psi_from_ul(const ULSpec& spec);

// Explicit finite weight distribution on positive integers; atom
// probabilities must sum to 1 within 1e-12.
PsiDistribution make_finite_psi(std::vector<std::pair<int, double>> atoms);

// theta Z has coefficients theta^{-k} a_k.
ULSpec scale_ul(const ULSpec& spec, double theta);

std::vector<double> sample_ul(const ULSpec& spec, int64_t n, Rng& rng);

// Builds the limit spec of the immigration urn from the gap law and the
// limiting raw moments of the companion urn with one initial black ball and
// b+w-1 white balls: v = b+w-1 and a_k = pi(k-1)/m_k.
ULSpec ul_from_urn_limit(int64_t b, int64_t w, const InterArrival& pi,
                         const std::vector<MomentEstimate>& estimates);

// inf over l with a_l > 0 of (c/l)(v a_l/l)^{-(v+m)/l} Gamma((v+m)/l); a valid
// upper bound for mu_m at every l, reported at the best searched one.
double moment_upper_bound(const ULSpec& spec, int m);

// C_alpha = P(Z >= alpha)/u(alpha), then P(Z >= x) <= C_alpha u(x) checked on
// a quantile grid to the right of alpha.
struct MillsReport {
  double c_alpha = 0.0;
  double max_ratio = 0.0;
  bool holds = false;
};
MillsReport mills_check(const ULSpec& spec, double alpha, int grid_points = 100);

}  // namespace polya
