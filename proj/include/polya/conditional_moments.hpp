#pragma once

#include <cstdint>
#include <vector>

#include "polya/interarrival.hpp"
#include "polya/rng.hpp"

namespace polya {

// Conditional rising-factorial moments of the immigration urn given the
// arrival times, and Monte Carlo estimates of the limiting scaled moments.
//
// D_{k,n} = X_n (X_n + 1) ... (X_n + k - 1); conditionally on the arrival
// sequence its expectation is a product of n simple factors, with an
// equivalent gamma-ratio form whose product runs only over the arrivals.

enum class MomentKind { factorial, raw };

struct MomentEstimate {
  int k = 0;
  double value = 0.0;
  double std_error = 0.0;
  int64_t paths = 0;
  int64_t horizon = 0;
  MomentKind kind = MomentKind::factorial;
};

// log E(D_{k,n} | arrivals) for every k = 1..k_max via the length-n product,
// one fused pass over the steps. Needs seq.horizon >= n-1.
std::vector<double> log_rising_factorial_moments_given_T(int k_max, int64_t n, double b,
                                                         double w, const ArrivalSequence& seq);

// Same quantity through the gamma-ratio form, whose product has one factor per
// arrival instead of one per draw.
double log_rising_factorial_moment_gamma_form(int k, int64_t n, double b, double w,
                                              const ArrivalSequence& seq);

// Evaluates both forms, insists they agree to 1e-10 relative, and returns the
// product-form value.
double rising_factorial_moment_given_T(int k, int64_t n, double b, double w,
                                       const ArrivalSequence& seq);

// Solves the triangular system x^{rising k} = sum_i stirling[k][i] x^i, turning
// rising-factorial moments of orders 1..k into raw moments.
std::vector<double> factorial_to_raw(const std::vector<double>& factorial_moments);

struct MomentEstimateOptions {
  int threads = 0;        // 0: resolve from environment
  bool bootstrap = false; // replace the CLT standard error by a bootstrap one
  int bootstrap_resamples = 200;
};

// Averages the conditional moments over `paths` independent arrival sequences,
// scaled by n^{-k mu/(mu+1)}. Returns factorial-kind estimates for k=1..k_max
// followed by raw-kind ones. Deterministic gap laws yield zero standard error
// (every path sees the same arrivals) and are evaluated once.
std::vector<MomentEstimate> estimate_limit_moments(int k_max, int64_t b, int64_t w,
                                                   const InterArrival& pi, int64_t n,
                                                   int64_t paths, uint64_t master_seed,
                                                   const MomentEstimateOptions& opts = {});

}  // namespace polya
