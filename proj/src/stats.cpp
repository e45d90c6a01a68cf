#include "polya/stats.hpp"

#include <algorithm>
#include <cmath>

#include "polya/errors.hpp"

namespace polya {

std::vector<MomentSummary> empirical_moments(std::span<const double> batch, int k_max) {
  if (batch.empty()) throw EmptyBatch("empirical_moments: empty batch");
  if (k_max < 1) throw DomainError("empirical_moments: k_max must be >= 1");
  const double n = static_cast<double>(batch.size());
  std::vector<MomentSummary> out;
  out.reserve(k_max);
  for (int k = 1; k <= k_max; ++k) {
    double sum = 0.0, comp = 0.0;
    for (double x : batch) {
      const double p = std::pow(x, k);
      const double y = p - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    const double mean = sum / n;
    double var = 0.0;
    for (double x : batch) {
      const double d = std::pow(x, k) - mean;
      var += d * d;
    }
    var /= n;
    out.push_back({k, mean, std::sqrt(var / n)});
  }
  return out;
}

double kolmogorov_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 101; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1) ? term : -term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

// Stephens' small-sample adjustment for the asymptotic p-value.
double ks_p_value(double d, double effective_n) {
  const double sq = std::sqrt(effective_n);
  return kolmogorov_tail((sq + 0.12 + 0.11 / sq) * d);
}

}  // namespace

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw EmptyBatch("ks_two_sample: empty batch");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const int64_t n1 = static_cast<int64_t>(a.size());
  const int64_t n2 = static_cast<int64_t>(b.size());
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  const double ne = static_cast<double>(n1) * n2 / (n1 + n2);
  return {d, ks_p_value(d, ne), n1, n2};
}

KsResult ks_vs_cdf(std::vector<double> a, const std::function<double(double)>& cdf) {
  if (a.empty()) throw EmptyBatch("ks_vs_cdf: empty batch");
  std::sort(a.begin(), a.end());
  const int64_t n = static_cast<int64_t>(a.size());
  double d = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    const double f = cdf(a[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return {d, ks_p_value(d, static_cast<double>(n)), n, 0};
}

void jitter_batch(std::vector<double>& xs, Rng& rng, double eps) {
  for (double& x : xs) x += (2.0 * rng.uniform() - 1.0) * eps;
}

}  // namespace polya
