#include "polya/special_functions.hpp"

#include <cmath>
#include <string>

#include "polya/errors.hpp"
#include "polya/quadrature.hpp"

namespace polya {

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: x must be positive, got " + std::to_string(x));
  return std::lgamma(x);
}

namespace {

// log of the Laplace integrand e^{-zt} t^{a-1} (1+t)^{b-a-1}
double log_integrand(double a, double b, double z, double t) {
  return -z * t + (a - 1.0) * std::log(t) + (b - a - 1.0) * std::log1p(t);
}

}  // namespace

double kummer_u(double a, double b, double z) {
  if (!(a > 0.0)) throw DomainError("kummer_u: a must be positive");
  if (!(z > 0.0)) throw DomainError("kummer_u: z must be positive");

  const double pw = b - a - 1.0;  // exponent of (1+t)

  // Head [0,1]. For a < 1 substitute t = s^{1/a}, which absorbs t^{a-1} dt
  // into ds/a exactly.
  std::function<double(double)> head;
  if (a < 1.0) {
    const double inv_a = 1.0 / a;
    head = [=](double s) {
      if (s <= 0.0) return 0.0;
      const double t = std::pow(s, inv_a);
      return inv_a * std::exp(-z * t + pw * std::log1p(t));
    };
  } else {
    head = [=](double t) {
      if (t <= 0.0) return a > 1.0 ? 0.0 : std::exp(pw * std::log1p(t));
      return std::exp(log_integrand(a, b, z, t));
    };
  }

  QuadratureResult head_r = integrate_rel(head, 0.0, 1.0, 1e-12);

  // Tail [1, T]: pick T so the integrand is 1e-18 below its peak on [1,inf).
  double peak_log = log_integrand(a, b, z, 1.0);
  if (pw > 0.0) {
    const double t_star = std::max(1.0, (a - 1.0 + pw) / z);
    peak_log = std::max(peak_log, log_integrand(a, b, z, t_star));
  }
  double T = 2.0;
  while (log_integrand(a, b, z, T) > peak_log + std::log(1e-18) && T < 1e12) T *= 2.0;

  auto tail = [=](double t) { return std::exp(log_integrand(a, b, z, t)); };
  QuadratureResult tail_r =
      integrate(tail, 1.0, T, 1e-12 * std::max(head_r.value + std::abs(tail(1.0)), 1e-30) + 1e-300);

  const double integral = head_r.value + tail_r.value;
  if (!(integral > 0.0)) throw QuadratureError("kummer_u: integral not positive");
  return std::exp(-log_gamma(a)) * integral;
}

double exp_integral_e1(double z) {
  if (!(z > 0.0)) throw DomainError("exp_integral_e1: z must be positive");
  constexpr double kEulerGamma = 0.57721566490153286060651209008240;
  if (z <= 1.0) {
    // E_1(z) = -gamma - log z + sum_{k>=1} (-1)^{k+1} z^k / (k * k!)
    double sum = 0.0, term = 1.0;
    for (int k = 1; k <= 60; ++k) {
      term *= z / k;
      const double add = term / k;
      sum += (k % 2 == 1) ? add : -add;
      if (add < 1e-18 * std::max(1.0, sum)) break;
    }
    return -kEulerGamma - std::log(z) + sum;
  }
  // Continued fraction e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - 9/...)))
  // evaluated with the modified Lentz algorithm.
  const double tiny = 1e-300;
  double f = tiny, c = f, d = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double an = (i == 1) ? 1.0 : -static_cast<double>(i - 1) * (i - 1);
    const double bn = (i == 1) ? z + 1.0 : z + 2.0 * i - 1.0;
    d = bn + an * d;
    if (d == 0.0) d = tiny;
    c = bn + an / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-z) * f;
}

std::vector<int64_t> stirling_first_row(int k) {
  if (k < 0) throw DomainError("stirling_first_row: k must be non-negative");
  if (k > 20) throw OverflowError("stirling_first_row: row " + std::to_string(k) +
                                  " exceeds 64-bit integers (limit 20)");
  // [k+1, i] = [k, i-1] + k * [k, i]
  std::vector<int64_t> row{1};  // k = 0: empty product
  for (int m = 1; m <= k; ++m) {
    std::vector<int64_t> next(m + 1, 0);
    for (int i = 0; i < m; ++i) {
      next[i + 1] += row[i];
      next[i] += (m - 1) * row[i];
    }
    row = std::move(next);
  }
  return row;
}

}  // namespace polya
