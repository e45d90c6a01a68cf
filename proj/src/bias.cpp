#include "polya/bias.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "polya/errors.hpp"
#include "polya/special_functions.hpp"
#include "polya/stats.hpp"

namespace polya {

namespace {

constexpr double kNegligible = 1e-18;
constexpr double kDegenerateMassFloor = 1e-3;
constexpr size_t kTableBudget = 30'000'000;  // cached prefix-sum entries across all K

class BiasSampler {
 public:
  BiasSampler(const std::vector<double>& values, const PsiDistribution& psi, bool rising)
      : psi_(psi), rising_(rising) {
    if (values.empty()) throw EmptyBatch("bias transform needs a non-empty batch");
    sorted_ = values;
    std::sort(sorted_.begin(), sorted_.end(), std::greater<double>());
    logw_.resize(sorted_.size());
    for (size_t i = 0; i < sorted_.size(); ++i) {
      const double x = sorted_[i];
      if (!std::isfinite(x) || !(x > 0.0))
        throw DomainError("bias transform needs finite positive values");
      if (rising_) {
        if (x != std::floor(x)) throw DomainError("rising-factorial bias needs integer values");
        logw_[i] = x;  // raw value; per-K weight uses log-gamma below
      } else {
        logw_[i] = std::log(x);
      }
    }
  }

  double draw(Rng& rng) {
    const int64_t k = psi_.sample(rng);
    const std::vector<double>& prefix = table_for(k);
    const double u = rng.uniform() * prefix.back();
    const auto it = std::lower_bound(prefix.begin(), prefix.end(), u);
    const size_t idx = static_cast<size_t>(it - prefix.begin());
    return sorted_[std::min(idx, sorted_.size() - 1)];
  }

 private:
  // Log weight of sorted entry i under index k; non-increasing in i.
  double log_weight(size_t i, int64_t k) const {
    if (rising_)
      return log_gamma(logw_[i] + static_cast<double>(k)) - log_gamma(logw_[i]);
    return static_cast<double>(k) * logw_[i];
  }

  // Prefix sums of exp(log weight - max), truncated once the remaining terms
  // cannot shift the distribution by more than ~1e-13 relative mass.
  std::vector<double> build_prefix(int64_t k) const {
    std::vector<double> prefix;
    prefix.reserve(64);
    const double shift = log_weight(0, k);
    double acc = 0.0;
    for (size_t i = 0; i < sorted_.size(); ++i) {
      const double term = std::exp(log_weight(i, k) - shift);
      if (i > 0 && term < kNegligible * acc) break;
      acc += term;
      prefix.push_back(acc);
    }
    // After the shift the largest weight is exactly 1, so it exceeds half the
    // total mass iff the total stays below 2.
    if (prefix.back() < 2.0 && psi_.pmf(k) >= kDegenerateMassFloor)
      throw DegenerateWeights("one batch point dominates the resampling weights");
    return prefix;
  }

  const std::vector<double>& table_for(int64_t k) {
    const auto it = tables_.find(k);
    if (it != tables_.end()) return it->second;
    std::vector<double> prefix = build_prefix(k);
    if (cached_entries_ + prefix.size() > kTableBudget) {
      scratch_ = std::move(prefix);  // budget exhausted: keep only transiently
      return scratch_;
    }
    cached_entries_ += prefix.size();
    return tables_.emplace(k, std::move(prefix)).first->second;
  }

  const PsiDistribution& psi_;
  bool rising_;
  std::vector<double> sorted_;  // batch values, descending
  std::vector<double> logw_;    // log value (power) or raw integer value (rising)
  std::unordered_map<int64_t, std::vector<double>> tables_;
  std::vector<double> scratch_;
  size_t cached_entries_ = 0;
};

SampleBatch run_bias(const SampleBatch& batch, const PsiDistribution& psi, Rng& rng,
                     int64_t n_out, bool rising, const char* label_suffix) {
  if (n_out < 1) throw ConfigError("output size must be >= 1");
  if (rising && !psi.has_finite_support())
    throw TooLargeError("rising-factorial bias needs a finite-support weight law");
  BiasSampler sampler(batch.values, psi, rising);
  SampleBatch out;
  out.seed = batch.seed;
  out.label = batch.label.empty() ? label_suffix : batch.label + ":" + label_suffix;
  out.values.resize(static_cast<size_t>(n_out));
  for (auto& x : out.values) x = sampler.draw(rng);
  return out;
}

}  // namespace

SampleBatch power_bias_sample(const SampleBatch& batch, const PsiDistribution& psi, Rng& rng,
                              int64_t n_out) {
  return run_bias(batch, psi, rng, n_out, false, "power-bias");
}

SampleBatch rising_factorial_bias_sample(const SampleBatch& batch, const PsiDistribution& psi,
                                         Rng& rng, int64_t n_out) {
  return run_bias(batch, psi, rng, n_out, true, "rising-bias");
}

FixedPointReport fixed_point_residual(const SampleBatch& batch, double w,
                                      const PsiDistribution& psi, Rng& rng) {
  if (!(w > 0.0)) throw ConfigError("need w > 0");
  if (batch.values.empty()) throw EmptyBatch("fixed_point_residual: empty batch");
  SampleBatch transformed = power_bias_sample(batch, psi, rng,
                                              static_cast<int64_t>(batch.values.size()));
  const double inv_w = 1.0 / w;
  for (auto& x : transformed.values) x *= std::exp(std::log(rng.uniform()) * inv_w);

  FixedPointReport rep;
  const KsResult ks = ks_two_sample(batch.values, transformed.values);
  rep.ks = ks.statistic;
  rep.p_value = ks.p_value;
  rep.n1 = ks.n1;
  rep.n2 = ks.n2;
  const auto lhs = empirical_moments(batch.values, 3);
  const auto rhs = empirical_moments(transformed.values, 3);
  for (int k = 1; k <= 3; ++k) {
    MomentRow row;
    row.k = k;
    row.lhs = lhs[static_cast<size_t>(k - 1)].mean;
    row.rhs = rhs[static_cast<size_t>(k - 1)].mean;
    row.se = std::hypot(lhs[static_cast<size_t>(k - 1)].std_error,
                        rhs[static_cast<size_t>(k - 1)].std_error);
    rep.moment_table.push_back(row);
  }
  return rep;
}

}  // namespace polya
