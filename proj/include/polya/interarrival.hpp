#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "polya/errors.hpp"
#include "polya/rng.hpp"

namespace polya {

// Extended-real mean of an inter-arrival law. Infinity is an explicit state,
// not a float sentinel, so the scaling exponent mu/(mu+1) -> 1 is a pattern
// match rather than an arithmetic accident.
class MeanValue {
 public:
  static MeanValue finite(double v) { return MeanValue(v, false); }
  static MeanValue infinite() { return MeanValue(0.0, true); }

  bool is_infinite() const { return infinite_; }
  double value() const {
    if (infinite_) throw DomainError("MeanValue: mean is infinite");
    return value_;
  }
  // mu/(mu+1), interpreted as 1 when mu is infinite.
  double scaling_exponent() const { return infinite_ ? 1.0 : value_ / (value_ + 1.0); }

 private:
  MeanValue(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

// ---- concrete laws -------------------------------------------------------

struct DeterministicLaw {
  int64_t k;  // tau == k, k >= 1
  int64_t sample(Rng&) const { return k; }
};

struct FiniteSupportLaw {
  std::vector<int64_t> values;  // sorted, distinct, >= 0
  std::vector<double> probs;    // normalized
  std::vector<double> cum;      // running sums, back() == 1

  int64_t sample(Rng& rng) const {
    const double u = rng.uniform();
    for (size_t i = 0; i + 1 < cum.size(); ++i)
      if (u <= cum[i]) return values[i];
    return values.back();
  }
};

struct GeometricLaw {
  double p;       // success probability in (0, 1]
  int start;      // support {start, start+1, ...}, start in {0, 1}
  double log_q;   // log(1 - p)

  int64_t sample(Rng& rng) const {
    if (p >= 1.0) return start;
    return start + static_cast<int64_t>(std::log(rng.uniform()) / log_q);
  }
};

// Heavy-tailed law whose pmf is a ratio of gamma functions (the partial sums
// telescope, so the tail has a closed form). alpha does not enter the pmf; it
// is carried along for the scaled reference law downstream.
struct PowerLawTauLaw {
  double alpha, beta, w;
  std::vector<double> cum;  // cumulative head, cum[j] = P(tau <= j)

  int64_t sample(Rng& rng) const;
  double log_tail(int64_t j) const;  // log P(tau >= j)
};

// ---- the immigration inter-arrival law -----------------------------------

class InterArrival {
 public:
  using Law = std::variant<DeterministicLaw, FiniteSupportLaw, GeometricLaw, PowerLawTauLaw>;

  static InterArrival deterministic(int64_t k);
  static InterArrival finite_support(std::vector<std::pair<int64_t, double>> atoms);
  static InterArrival geometric(double p, int start);
  static InterArrival power_law(double alpha, double beta, double w);

  double pmf(int64_t j) const;
  MeanValue mean() const { return mean_; }
  double scaling_exponent() const { return mean_.scaling_exponent(); }
  int64_t sample(Rng& rng) const;
  const Law& law() const { return law_; }

  // True for laws whose support is a finite explicit atom list.
  bool has_finite_support() const;
  std::vector<std::pair<int64_t, double>> atoms() const;  // TooLargeError otherwise

 private:
  InterArrival(Law law, MeanValue mean) : law_(std::move(law)), mean_(mean) {}
  Law law_;
  MeanValue mean_;
};

// ---- arrival-time sequences ------------------------------------------------

// The arrival times T_1 <= T_2 <= ... <= horizon of the immigration process,
// plus the first arrival time beyond the horizon. N_j counts arrivals with
// T_i <= j.
struct ArrivalSequence {
  int64_t horizon = 0;
  std::vector<int64_t> times;  // sorted, duplicates allowed, all <= horizon
  int64_t next_after = 1;      // first arrival time > horizon

  int64_t count_up_to(int64_t j) const;  // N_j
  std::vector<int64_t> counting() const;  // N_0 .. N_horizon

  // Builds T and N from explicit gaps; the gaps must reach past the horizon.
  static ArrivalSequence from_taus(const std::vector<int64_t>& taus, int64_t horizon);
};

ArrivalSequence sample_arrivals(const InterArrival& pi, int64_t horizon, Rng& rng);

// Exhaustive arrival-sequence enumeration for finite-support laws; branches
// whose probability falls below prune_below are dropped and accounted in
// truncated_mass (runs of zero gaps make the exact tree infinite).
struct ArrivalEnumeration {
  std::vector<ArrivalSequence> sequences;
  std::vector<double> probs;
  double truncated_mass = 0.0;
};

ArrivalEnumeration enumerate_arrivals(const InterArrival& pi, int64_t horizon,
                                      double prune_below = 1e-16);

}  // namespace polya
