#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polya/rng.hpp"
#include "polya/ul.hpp"

namespace polya {

struct SampleBatch {
  std::vector<double> values;
  uint64_t seed = 0;
  std::string label;
};

// Weighted resampling from a batch. An output draw picks an index K from the
// weight distribution, then resamples the batch with probabilities
// proportional to x^K (power bias) or x(x+1)...(x+K-1) (rising-factorial
// bias). Weights are handled in log space; for infinite-support weight laws
// with large K the scan runs over the batch sorted descending and stops once
// the remaining weights cannot matter.
//
// DegenerateWeights fires when, for some K carrying at least 1e-3 of the
// weight mass, a single batch point owns more than half the resampling
// weight: the batch is too small or too heavy-tailed to represent that bias.
// Rare large-K draws from an infinite-support law are exempt, since for K
// large enough the batch maximum always dominates.
SampleBatch power_bias_sample(const SampleBatch& batch, const PsiDistribution& psi, Rng& rng,
                              int64_t n_out);

// Rising-factorial variant; batch values must be positive integers and the
// weight distribution must have finite support.
SampleBatch rising_factorial_bias_sample(const SampleBatch& batch, const PsiDistribution& psi,
                                         Rng& rng, int64_t n_out);

// Distributional residual of the fixed-point identity: apply the power bias,
// multiply by an independent Beta(w,1) factor (sampled as U^{1/w}), and
// compare against the original batch by a two-sample KS test plus a
// moment-discrepancy table.
struct MomentRow {
  int k = 0;
  double lhs = 0.0;  // batch k-th moment
  double rhs = 0.0;  // transformed-batch k-th moment
  double se = 0.0;   // combined standard error
};

struct FixedPointReport {
  double ks = 0.0;
  double p_value = 0.0;
  int64_t n1 = 0;
  int64_t n2 = 0;
  std::vector<MomentRow> moment_table;
};

FixedPointReport fixed_point_residual(const SampleBatch& batch, double w,
                                      const PsiDistribution& psi, Rng& rng);

}  // namespace polya
