#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "polya/errors.hpp"
#include "polya/interarrival.hpp"
#include "polya/rng.hpp"

namespace polya {

// Two-color urn with black immigration: start with b black and w white balls;
// each draw returns the ball plus one more of its color, and one extra black
// ball is added at every arrival time of the immigration process. Arrivals at
// time t enter the urn after draw t (time 0 means before the first draw).
struct UrnConfig {
  int64_t b = 1;
  int64_t w = 1;
  InterArrival pi;
  int64_t n = 0;
};

void validate(const UrnConfig& cfg);

struct UrnResult {
  int64_t white = 0;  // X_n = w + number of white draws
  int64_t black = 0;  // b + number of black draws + immigrant blacks
  ArrivalSequence arrivals;
  // Optional (white, black) totals after each completed step 1..n.
  std::vector<std::pair<int64_t, int64_t>> path;
};

UrnResult simulate_urn(const UrnConfig& cfg, Rng& rng, bool keep_path = false);

// White count after n draws when the arrival times are fixed in advance;
// requires seq.horizon >= n.
int64_t simulate_whites_given_arrivals(int64_t b, int64_t w, const ArrivalSequence& seq,
                                       int64_t n, Rng& rng);

// ---- exact small-instance distribution -------------------------------------

// probs[c] = P(X_n = white_min + c); mass lost to pruned zero-gap runs is
// reported, never silently dropped.
struct ExactPmf {
  int64_t white_min = 0;
  std::vector<double> probs;
  double truncated_mass = 0.0;

  double prob_of(int64_t white_count) const;
  double moment(int k) const;  // E X_n^k
};

// Dynamic program over (whites, arrival count, gap phase); limited to n <= 10
// and finite gap support with at most 4 atoms to keep the state space small.
ExactPmf exact_pmf(const UrnConfig& cfg);

// Same distribution conditional on a fixed arrival sequence (plain DP over the
// white count, no size cap).
ExactPmf exact_pmf_given_arrivals(int64_t b, int64_t w, const ArrivalSequence& seq, int64_t n);

// ---- scaling and batches ----------------------------------------------------

// x / n^{mu/(mu+1)}, with exponent 1 for infinite-mean gap laws.
double scaled_white(double x_n, int64_t n, const MeanValue& mu);

struct BatchPath {
  int64_t x = 0;         // X_n
  int64_t arrivals = 0;  // N_n
};

// One path per RNG stream index; results depend only on (master_seed, paths),
// not on the thread count.
std::vector<BatchPath> simulate_batch(const UrnConfig& cfg, int64_t paths,
                                      uint64_t master_seed, int threads);
std::vector<BatchPath> simulate_batch_serial(const UrnConfig& cfg, int64_t paths,
                                             uint64_t master_seed);

// ---- classical urn (no immigration) -----------------------------------------

// pmf[j] = P(j white draws in n steps) for the classical urn started with the
// given blacks and whites.
std::vector<double> classical_polya_pmf(int64_t blacks, int64_t whites, int64_t n);

// Couples the classical urn's white-ball count Q(n) with its Beta(omega, beta)
// limit V through a single shared uniform (both are monotone transforms of it,
// which minimizes the worst-case gap). Every sample is checked against the
// deterministic bound |Q - nV| < beta(4 omega + beta + 1).
class ClassicalPolyaCoupler {
 public:
  ClassicalPolyaCoupler(int64_t beta_blacks, int64_t omega_whites, int64_t n);

  struct Sample {
    int64_t q;  // white balls after n draws, in [omega, omega + n]
    double v;   // Beta(omega, beta) value from the same uniform
  };
  Sample sample(Rng& rng) const;
  double bound() const { return bound_; }

 private:
  int64_t beta_, omega_, n_;
  std::vector<double> cum_;
  double bound_;
};

std::pair<int64_t, double> simulate_classical_polya(int64_t beta_blacks, int64_t omega_whites,
                                                    int64_t n, Rng& rng);

}  // namespace polya
