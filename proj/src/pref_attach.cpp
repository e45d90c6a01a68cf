#include "polya/pref_attach.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <utility>

#include "polya/parallel.hpp"
#include "polya/urn.hpp"

namespace polya {

namespace {

constexpr int64_t kTreeThreshold = 10000;   // vertex count above which a Fenwick tree pays
constexpr int64_t kMaxExactSequences = 20000;
constexpr int64_t kMaxExactEdges = 512;
constexpr double kSequencePrune = 1e-16;

}  // namespace

SeedGraph make_seed_graph(std::vector<int64_t> degrees) {
  if (degrees.empty()) throw ConfigError("seed graph needs at least one vertex");
  SeedGraph g;
  g.cumulative.reserve(degrees.size());
  int64_t run = 0;
  for (const int64_t d : degrees) {
    if (d <= 0) throw ConfigError("seed degrees must be positive");
    run += d;
    g.cumulative.push_back(run);
  }
  g.degrees = std::move(degrees);
  return g;
}

PASimulator::PASimulator(SeedGraph seed, int64_t expected_vertices) {
  state_.weights = seed.degrees;
  state_.total_weight = seed.total();
  use_tree_ = std::max<int64_t>(expected_vertices, seed.size()) > kTreeThreshold;
  if (use_tree_) {
    tree_.assign(static_cast<size_t>(std::max<int64_t>(expected_vertices, seed.size())) + 1, 0);
    for (size_t i = 0; i < state_.weights.size(); ++i)
      for (size_t j = i + 1; j < tree_.size(); j += j & (~j + 1)) tree_[j] += state_.weights[i];
  }
}

int64_t PASimulator::pick_target(Rng& rng) {
  const double x = rng.uniform() * static_cast<double>(state_.total_weight);
  const int64_t nv = static_cast<int64_t>(state_.weights.size());
  if (!use_tree_) {
    double acc = 0.0;
    for (int64_t i = 0; i < nv; ++i) {
      acc += static_cast<double>(state_.weights[i]);
      if (x < acc) return i;
    }
    return nv - 1;
  }
  // Descend to the largest index whose prefix sum stays <= x; the next vertex
  // is the one the uniform landed in.
  size_t pos = 0;
  double rem = x;
  for (size_t bit = std::bit_floor(static_cast<size_t>(nv)); bit != 0; bit >>= 1) {
    const size_t next = pos + bit;
    if (next <= static_cast<size_t>(nv) && static_cast<double>(tree_[next]) <= rem) {
      rem -= static_cast<double>(tree_[next]);
      pos = next;
    }
  }
  return std::min<int64_t>(static_cast<int64_t>(pos), nv - 1);
}

void PASimulator::bump(int64_t vertex) {
  state_.weights[static_cast<size_t>(vertex)] += 1;
  state_.total_weight += 1;
  if (use_tree_)
    for (size_t j = static_cast<size_t>(vertex) + 1; j < tree_.size(); j += j & (~j + 1))
      tree_[j] += 1;
}

void PASimulator::push_vertex() {
  state_.weights.push_back(1);
  state_.total_weight += 1;
  if (!use_tree_) return;
  if (state_.weights.size() + 1 > tree_.size()) {
    tree_.assign(2 * tree_.size(), 0);
    for (size_t i = 0; i < state_.weights.size(); ++i)
      for (size_t j = i + 1; j < tree_.size(); j += j & (~j + 1)) tree_[j] += state_.weights[i];
    return;
  }
  for (size_t j = state_.weights.size(); j < tree_.size(); j += j & (~j + 1)) tree_[j] += 1;
}

void PASimulator::add_vertex(int64_t tau, Rng& rng) {
  if (tau < 0) throw DomainError("out-degree must be >= 0");
  for (int64_t e = 0; e < tau; ++e) bump(pick_target(rng));
  push_vertex();
  state_.step += 1;
  state_.total_edges += tau;
}

PAState simulate_pa(const SeedGraph& seed, const InterArrival& pi, int64_t n, Rng& rng) {
  if (n < 0) throw DomainError("need n >= 0");
  PASimulator sim(seed, seed.size() + n);
  for (int64_t m = 0; m < n; ++m) sim.add_vertex(pi.sample(rng), rng);
  return sim.state();
}

PAState simulate_pa_given_taus(const SeedGraph& seed, const std::vector<int64_t>& taus,
                               Rng& rng) {
  PASimulator sim(seed, seed.size() + static_cast<int64_t>(taus.size()));
  for (const int64_t tau : taus) sim.add_vertex(tau, rng);
  return sim.state();
}

int64_t cumulative_degree(const PAState& state, int64_t k) {
  if (k < 1 || k > static_cast<int64_t>(state.weights.size()))
    throw DomainError("vertex prefix length out of range");
  int64_t sum = 0;
  for (int64_t i = 0; i < k; ++i) sum += state.weights[static_cast<size_t>(i)];
  return sum;
}

namespace {

// Sum of tau[from..n-1].
int64_t tau_sum(const std::vector<int64_t>& taus, size_t from) {
  int64_t s = 0;
  for (size_t i = from; i < taus.size(); ++i) s += taus[i];
  return s;
}

// Urn parameters equivalent to the k-prefix weight sum after the given taus:
// the prefix weights are the whites, one draw per edge, one immigrant black
// per later vertex. For k past the seed the first k-s+1 steps feed the prefix
// deterministically and the urn starts there.
struct UrnSide {
  int64_t b = 0, w = 0, draws = 0;
  ArrivalSequence seq;
};

UrnSide urn_side_for(const SeedGraph& seed, const std::vector<int64_t>& taus, int64_t k) {
  const int64_t s = seed.size();
  UrnSide u;
  std::vector<int64_t> gaps;
  if (k < s) {
    u.b = seed.total() - seed.cumulative[static_cast<size_t>(k) - 1];
    u.w = seed.cumulative[static_cast<size_t>(k) - 1];
    u.draws = tau_sum(taus, 0);
    gaps = taus;
  } else {
    const size_t head = static_cast<size_t>(k - s) + 1;  // vertices s+1..k+1
    int64_t head_edges = 0;
    for (size_t i = 0; i < head; ++i) head_edges += taus[i];
    u.b = 1;
    u.w = seed.total() + (k - s) + head_edges;
    u.draws = tau_sum(taus, head);
    gaps.assign(taus.begin() + static_cast<int64_t>(head), taus.end());
  }
  gaps.push_back(1);  // sentinel arrival past the horizon
  u.seq = ArrivalSequence::from_taus(gaps, u.draws);
  return u;
}

// Distribution of the k-prefix weight sum after fixed taus: a DP over the
// number of edges the prefix captured, with the deterministic weight-1
// additions of in-prefix vertices carried in the base.
std::pair<int64_t, std::vector<double>> pa_prefix_pmf(const SeedGraph& seed,
                                                      const std::vector<int64_t>& taus,
                                                      int64_t k) {
  const int64_t s = seed.size();
  int64_t base = (k < s) ? seed.cumulative[static_cast<size_t>(k) - 1] : seed.total();
  int64_t total = seed.total();
  std::vector<double> probs{1.0};
  for (size_t m = 0; m < taus.size(); ++m) {
    for (int64_t e = 0; e < taus[m]; ++e) {
      std::vector<double> next(probs.size() + 1, 0.0);
      for (size_t off = 0; off < probs.size(); ++off) {
        const double p_in = static_cast<double>(base + static_cast<int64_t>(off)) /
                            static_cast<double>(total);
        next[off + 1] += probs[off] * p_in;
        next[off] += probs[off] * (1.0 - p_in);
      }
      probs.swap(next);
      total += 1;
    }
    if (s + static_cast<int64_t>(m) + 1 <= k) base += 1;
    total += 1;
  }
  return {base, std::move(probs)};
}

void check_prefix_length(const SeedGraph& seed, int64_t k, int64_t n) {
  if (k < 1) throw DomainError("vertex prefix length must be >= 1");
  if (k >= seed.size() + n)
    throw DomainError("vertex prefix must leave at least one vertex outside");
}

}  // namespace

CorrespondenceExact correspondence_exact(const SeedGraph& seed, const InterArrival& pi,
                                         int64_t k, int64_t n) {
  check_prefix_length(seed, k, n);
  if (n < 0) throw DomainError("need n >= 0");
  if (!pi.has_finite_support())
    throw TooLargeError("exact correspondence needs a finite-support gap law");
  const auto atoms = pi.atoms();
  double seqs = 1.0;
  int64_t max_edges = 0;
  for (int64_t m = 0; m < n; ++m) {
    seqs *= static_cast<double>(atoms.size());
    max_edges += atoms.back().first;
  }
  if (seqs > static_cast<double>(kMaxExactSequences))
    throw TooLargeError("too many gap sequences to enumerate");
  if (max_edges > kMaxExactEdges) throw TooLargeError("too many edges to enumerate");

  std::map<int64_t, double> pa_mix, urn_mix;
  double truncated = 0.0;
  std::vector<size_t> pick(static_cast<size_t>(n), 0);
  for (;;) {
    std::vector<int64_t> taus(static_cast<size_t>(n));
    double prob = 1.0;
    for (size_t i = 0; i < pick.size(); ++i) {
      taus[i] = atoms[pick[i]].first;
      prob *= atoms[pick[i]].second;
    }
    if (prob < kSequencePrune) {
      truncated += prob;
    } else {
      const auto [base, probs] = pa_prefix_pmf(seed, taus, k);
      for (size_t off = 0; off < probs.size(); ++off)
        if (probs[off] > 0.0) pa_mix[base + static_cast<int64_t>(off)] += prob * probs[off];
      const UrnSide u = urn_side_for(seed, taus, k);
      const ExactPmf pmf = exact_pmf_given_arrivals(u.b, u.w, u.seq, u.draws);
      for (size_t i = 0; i < pmf.probs.size(); ++i)
        if (pmf.probs[i] > 0.0)
          urn_mix[pmf.white_min + static_cast<int64_t>(i)] += prob * pmf.probs[i];
    }
    // odometer over the atom choices
    size_t pos = 0;
    while (pos < pick.size() && ++pick[pos] == atoms.size()) pick[pos++] = 0;
    if (pos == pick.size()) break;
  }

  CorrespondenceExact out;
  out.truncated_mass = truncated;
  if (pa_mix.empty() && urn_mix.empty()) return out;
  int64_t lo = std::min(pa_mix.begin()->first, urn_mix.begin()->first);
  int64_t hi = std::max(pa_mix.rbegin()->first, urn_mix.rbegin()->first);
  out.value_min = lo;
  out.pa_pmf.assign(static_cast<size_t>(hi - lo) + 1, 0.0);
  out.urn_pmf.assign(static_cast<size_t>(hi - lo) + 1, 0.0);
  for (const auto& [v, p] : pa_mix) out.pa_pmf[static_cast<size_t>(v - lo)] = p;
  for (const auto& [v, p] : urn_mix) out.urn_pmf[static_cast<size_t>(v - lo)] = p;
  for (size_t i = 0; i < out.pa_pmf.size(); ++i)
    out.max_gap = std::max(out.max_gap, std::abs(out.pa_pmf[i] - out.urn_pmf[i]));
  return out;
}

CorrespondenceMc correspondence_mc(const SeedGraph& seed, const InterArrival& pi, int64_t k,
                                   int64_t n, int64_t paths, uint64_t master_seed,
                                   int threads) {
  check_prefix_length(seed, k, n);
  if (n < 1 || paths < 1) throw DomainError("need n >= 1 and paths >= 1");
  if (k >= seed.size() && n < k - seed.size() + 1)
    throw DomainError("prefix past the seed needs enough added vertices");
  std::vector<double> pa_vals(static_cast<size_t>(paths));
  std::vector<double> urn_vals(static_cast<size_t>(paths));
  const int nthreads = resolve_threads(threads);
  parallel_for_index(paths, nthreads, [&](int64_t i) {
    Rng tau_rng = Rng::for_stream(master_seed, 3 * static_cast<uint64_t>(i));
    Rng pa_rng = Rng::for_stream(master_seed, 3 * static_cast<uint64_t>(i) + 1);
    Rng urn_rng = Rng::for_stream(master_seed, 3 * static_cast<uint64_t>(i) + 2);
    std::vector<int64_t> taus(static_cast<size_t>(n));
    for (auto& t : taus) t = pi.sample(tau_rng);
    const PAState state = simulate_pa_given_taus(seed, taus, pa_rng);
    pa_vals[static_cast<size_t>(i)] = static_cast<double>(cumulative_degree(state, k));
    const UrnSide u = urn_side_for(seed, taus, k);
    urn_vals[static_cast<size_t>(i)] = static_cast<double>(
        simulate_whites_given_arrivals(u.b, u.w, u.seq, u.draws, urn_rng));
  });
  Rng jitter_rng = Rng::for_stream(master_seed, 3 * static_cast<uint64_t>(paths) + 1);
  jitter_batch(pa_vals, jitter_rng);
  jitter_batch(urn_vals, jitter_rng);
  CorrespondenceMc out;
  out.paths = paths;
  out.ks = ks_two_sample(std::move(pa_vals), std::move(urn_vals));
  return out;
}

}  // namespace polya
