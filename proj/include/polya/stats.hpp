#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "polya/rng.hpp"

namespace polya {

struct MomentSummary {
  int k = 0;
  double mean = 0.0;
  double std_error = 0.0;
};

// Sample moments E x^k for k = 1..k_max with CLT standard errors.
std::vector<MomentSummary> empirical_moments(std::span<const double> batch, int k_max);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;  // asymptotic
  int64_t n1 = 0, n2 = 0;
};

// Two-sample Kolmogorov-Smirnov; ties are walked jointly before the gap is
// recorded. p-value is the asymptotic Kolmogorov tail with the usual
// small-sample correction, not an exact permutation value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// One-sample KS against a CDF evaluator.
KsResult ks_vs_cdf(std::vector<double> a, const std::function<double(double)>& cdf);

// Kolmogorov tail Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_tail(double lambda);

// Symmetric +-eps uniform jitter, applied to integer-valued batches before KS
// so that tie handling cannot mask genuine discrepancies.
void jitter_batch(std::vector<double>& xs, Rng& rng, double eps = 1e-9);

}  // namespace polya
