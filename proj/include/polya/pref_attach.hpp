#pragma once

#include <cstdint>
#include <vector>

#include "polya/errors.hpp"
#include "polya/interarrival.hpp"
#include "polya/rng.hpp"
#include "polya/stats.hpp"

namespace polya {

// Sequential preferential attachment with random out-degrees. The graph
// starts from s seed vertices with weights d_1..d_s. New vertex s+m sends
// tau_m edges, one at a time, each attaching to an existing vertex (never to
// s+m itself) with probability proportional to its current weight; the
// target's weight is bumped before the next edge picks. After its edges are
// placed the new vertex joins the pool with weight 1.
//
// Partial weight sums of this graph are immigration urns: group the first k
// vertices as white and everything else as black, and edges become draws
// while new vertices become the immigrant blacks, driven by the same taus.

struct SeedGraph {
  std::vector<int64_t> degrees;     // d_1..d_s, all positive
  std::vector<int64_t> cumulative;  // c_i = d_1 + ... + d_i

  int64_t size() const { return static_cast<int64_t>(degrees.size()); }
  int64_t total() const { return cumulative.back(); }
};

SeedGraph make_seed_graph(std::vector<int64_t> degrees);

struct PAState {
  std::vector<int64_t> weights;  // d_i(n), seed vertices first
  int64_t step = 0;              // n, vertices added so far
  int64_t total_edges = 0;       // T_n
  int64_t total_weight = 0;      // = c_s + n + T_n, maintained incrementally
};

// Incremental simulator. Target selection walks the flat weight array at
// small sizes and switches to a Fenwick tree once the final vertex count
// can exceed 10^4, so a step costs O(log V) at scale.
class PASimulator {
 public:
  // expected_vertices sizes the index structure; growing past it is allowed
  // but falls back to amortized reallocation.
  PASimulator(SeedGraph seed, int64_t expected_vertices);

  // Adds one vertex with the given out-degree, sampling its edge targets.
  void add_vertex(int64_t tau, Rng& rng);

  const PAState& state() const { return state_; }

 private:
  int64_t pick_target(Rng& rng);
  void bump(int64_t vertex);
  void push_vertex();

  PAState state_;
  bool use_tree_ = false;
  std::vector<int64_t> tree_;  // Fenwick over vertex weights, 1-based
};

PAState simulate_pa(const SeedGraph& seed, const InterArrival& pi, int64_t n, Rng& rng);

// Same walk with the out-degrees fixed in advance (the coupling handle for
// the urn correspondence).
PAState simulate_pa_given_taus(const SeedGraph& seed, const std::vector<int64_t>& taus,
                               Rng& rng);

// Sum of the first k vertex weights; k must lie in [1, vertex count].
int64_t cumulative_degree(const PAState& state, int64_t k);

// ---- correspondence with the immigration urn --------------------------------

// Exact check: mixes the distribution of the k-prefix weight sum over all
// tau sequences (finite-support laws only) and compares it against the urn
// distribution driven by the same taus, atom by atom.
struct CorrespondenceExact {
  int64_t value_min = 0;            // smallest reachable weight sum
  std::vector<double> pa_pmf;       // graph-side distribution
  std::vector<double> urn_pmf;      // urn-side distribution, same offsets
  double max_gap = 0.0;             // max atom-wise |difference|
  double truncated_mass = 0.0;      // tau-sequence mass dropped by pruning
};

CorrespondenceExact correspondence_exact(const SeedGraph& seed, const InterArrival& pi,
                                         int64_t k, int64_t n);

// Monte Carlo check: per path the same tau draw drives one graph walk and one
// urn walk (independent edge/draw randomness), and the two value batches are
// compared by a two-sample KS test. Thread count does not affect the output.
struct CorrespondenceMc {
  KsResult ks;
  int64_t paths = 0;
};

CorrespondenceMc correspondence_mc(const SeedGraph& seed, const InterArrival& pi, int64_t k,
                                   int64_t n, int64_t paths, uint64_t master_seed,
                                   int threads);

}  // namespace polya
