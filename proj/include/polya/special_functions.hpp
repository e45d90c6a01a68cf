#pragma once

#include <cstdint>
#include <vector>

namespace polya {

// log Gamma(x) for x > 0. Thin validated wrapper over the C library (which is
// well inside the 1e-13 relative error this project needs).
double log_gamma(double x);

// Confluent hypergeometric function of the second kind,
//   U(a,b,z) = (1/Gamma(a)) * integral_0^inf e^{-zt} t^{a-1} (1+t)^{b-a-1} dt,
// for a > 0, z > 0, b real, evaluated from the integral. The t->0 endpoint
// singularity for a < 1 is removed by the substitution t = s^{1/a}; the
// infinite tail is truncated where it falls 1e-18 below the integrand peak.
// Relative accuracy target 1e-10.
double kummer_u(double a, double b, double z);

// Exponential integral E_1(z) = integral_z^inf e^{-t}/t dt for z > 0.
// Series for small z, modified-Lentz continued fraction for large z.
double exp_integral_e1(double z);

// Row k of the unsigned Stirling numbers of the first kind: row[i] = [k, i]
// for i = 0..k, so that x(x+1)...(x+k-1) = sum_i row[i] x^i. Exact in 64-bit
// for k <= 20; OverflowError beyond.
std::vector<int64_t> stirling_first_row(int k);

}  // namespace polya
