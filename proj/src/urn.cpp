#include "polya/urn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "polya/parallel.hpp"
#include "polya/special_functions.hpp"

namespace polya {

namespace {

struct PathCounts {
  int64_t whites_drawn = 0;
  int64_t arrivals = 0;
};

// Hot kernel: one urn path with the gap law resolved at compile time so the
// per-draw cost stays a uniform, a compare, and a few integer updates.
template <class Law>
PathCounts run_path(int64_t b, int64_t w, const Law& law, int64_t n, Rng& rng) {
  PathCounts out;
  int64_t next_t = law.sample(rng);
  while (next_t <= 0) {  // arrivals before the first draw
    ++out.arrivals;
    next_t += law.sample(rng);
  }
  for (int64_t j = 1; j <= n; ++j) {
    const double x = static_cast<double>(w + out.whites_drawn);
    const double total = static_cast<double>(b + w + (j - 1) + out.arrivals);
    if (rng.uniform() * total < x) ++out.whites_drawn;
    while (next_t <= j) {
      ++out.arrivals;
      next_t += law.sample(rng);
    }
  }
  return out;
}

constexpr double kPruneBelow = 1e-18;

}  // namespace

void validate(const UrnConfig& cfg) {
  if (cfg.b < 1) throw ConfigError("initial black count must be >= 1");
  if (cfg.w < 1) throw ConfigError("initial white count must be >= 1");
  if (cfg.n < 0) throw ConfigError("draw count must be >= 0");
}

UrnResult simulate_urn(const UrnConfig& cfg, Rng& rng, bool keep_path) {
  validate(cfg);
  UrnResult res;
  res.arrivals = sample_arrivals(cfg.pi, cfg.n, rng);
  if (keep_path) res.path.reserve(static_cast<size_t>(cfg.n));
  int64_t whites_drawn = 0;
  size_t arrival_idx = 0;
  int64_t count = 0;  // N_j while walking
  while (arrival_idx < res.arrivals.times.size() && res.arrivals.times[arrival_idx] <= 0) {
    ++count;
    ++arrival_idx;
  }
  for (int64_t j = 1; j <= cfg.n; ++j) {
    const double x = static_cast<double>(cfg.w + whites_drawn);
    const double total = static_cast<double>(cfg.b + cfg.w + (j - 1) + count);
    if (rng.uniform() * total < x) ++whites_drawn;
    while (arrival_idx < res.arrivals.times.size() && res.arrivals.times[arrival_idx] <= j) {
      ++count;
      ++arrival_idx;
    }
    if (keep_path)
      res.path.emplace_back(cfg.w + whites_drawn, cfg.b + (j - whites_drawn) + count);
  }
  res.white = cfg.w + whites_drawn;
  res.black = cfg.b + (cfg.n - whites_drawn) + count;
  return res;
}

int64_t simulate_whites_given_arrivals(int64_t b, int64_t w, const ArrivalSequence& seq,
                                       int64_t n, Rng& rng) {
  if (b < 1 || w < 1 || n < 0) throw ConfigError("need b >= 1, w >= 1, n >= 0");
  if (seq.horizon < n) throw DomainError("arrival sequence horizon shorter than draw count");
  int64_t whites_drawn = 0;
  size_t arrival_idx = 0;
  int64_t count = 0;
  while (arrival_idx < seq.times.size() && seq.times[arrival_idx] <= 0) {
    ++count;
    ++arrival_idx;
  }
  for (int64_t j = 1; j <= n; ++j) {
    const double x = static_cast<double>(w + whites_drawn);
    const double total = static_cast<double>(b + w + (j - 1) + count);
    if (rng.uniform() * total < x) ++whites_drawn;
    while (arrival_idx < seq.times.size() && seq.times[arrival_idx] <= j) {
      ++count;
      ++arrival_idx;
    }
  }
  return w + whites_drawn;
}

// ---- exact pmf ---------------------------------------------------------------

double ExactPmf::prob_of(int64_t white_count) const {
  const int64_t c = white_count - white_min;
  if (c < 0 || c >= static_cast<int64_t>(probs.size())) return 0.0;
  return probs[static_cast<size_t>(c)];
}

double ExactPmf::moment(int k) const {
  if (k < 0) throw DomainError("moment order must be >= 0");
  double sum = 0.0;
  for (size_t c = 0; c < probs.size(); ++c)
    sum += probs[c] * std::pow(static_cast<double>(white_min + static_cast<int64_t>(c)),
                               static_cast<double>(k));
  return sum;
}

ExactPmf exact_pmf(const UrnConfig& cfg) {
  validate(cfg);
  if (cfg.n > 10) throw TooLargeError("exact pmf limited to n <= 10");
  if (!cfg.pi.has_finite_support())
    throw TooLargeError("exact pmf needs a finite-support gap law");
  const auto atoms = cfg.pi.atoms();
  if (atoms.size() > 4) throw TooLargeError("exact pmf limited to 4 gap atoms");

  ExactPmf out;
  out.white_min = cfg.w;
  out.probs.assign(static_cast<size_t>(cfg.n) + 1, 0.0);

  // State: (whites drawn, arrivals so far, steps until next arrival >= 1).
  using Key = std::tuple<int64_t, int64_t, int64_t>;
  std::map<Key, double> cur;

  // An arrival just fired (or we are at the start); branch over the next gap,
  // folding runs of zero gaps into extra arrivals at the same time.
  auto branch_gap = [&](auto&& self, std::map<Key, double>& dst, int64_t c, int64_t count,
                        double p) -> void {
    if (p < kPruneBelow) {
      out.truncated_mass += p;
      return;
    }
    for (const auto& [v, pv] : atoms) {
      if (v >= 1)
        dst[Key{c, count, v}] += p * pv;
      else
        self(self, dst, c, count + 1, p * pv);
    }
  };
  branch_gap(branch_gap, cur, 0, 0, 1.0);

  for (int64_t j = 1; j <= cfg.n; ++j) {
    std::map<Key, double> next;
    for (const auto& [key, p] : cur) {
      const auto [c, count, gap] = key;
      const double x = static_cast<double>(cfg.w + c);
      const double total = static_cast<double>(cfg.b + cfg.w + (j - 1) + count);
      const double pw = x / total;
      for (int color = 0; color < 2; ++color) {
        const int64_t c2 = c + (color == 0 ? 1 : 0);
        const double p2 = p * (color == 0 ? pw : 1.0 - pw);
        if (p2 == 0.0) continue;
        if (j == cfg.n) {
          out.probs[static_cast<size_t>(c2)] += p2;  // arrivals at time n don't move X_n
        } else if (gap > 1) {
          next[Key{c2, count, gap - 1}] += p2;
        } else {
          branch_gap(branch_gap, next, c2, count + 1, p2);
        }
      }
    }
    cur.swap(next);
  }
  if (cfg.n == 0)
    for (const auto& [key, p] : cur) out.probs[0] += p;

  double mass = out.truncated_mass;
  for (const double p : out.probs) mass += p;
  if (std::abs(mass - 1.0) > 1e-12)
    throw InternalInconsistency("exact pmf mass does not account to 1");
  return out;
}

ExactPmf exact_pmf_given_arrivals(int64_t b, int64_t w, const ArrivalSequence& seq, int64_t n) {
  if (b < 1 || w < 1 || n < 0) throw ConfigError("need b >= 1, w >= 1, n >= 0");
  if (n > 0 && seq.horizon < n - 1)
    throw DomainError("arrival sequence horizon shorter than draw count");
  ExactPmf out;
  out.white_min = w;
  std::vector<double> dp(static_cast<size_t>(n) + 1, 0.0);
  dp[0] = 1.0;
  for (int64_t j = 1; j <= n; ++j) {
    const int64_t count = seq.count_up_to(j - 1);
    std::vector<double> next(dp.size(), 0.0);
    const double total = static_cast<double>(b + w + (j - 1) + count);
    for (int64_t c = 0; c < j; ++c) {
      const double p = dp[static_cast<size_t>(c)];
      if (p == 0.0) continue;
      const double pw = static_cast<double>(w + c) / total;
      next[static_cast<size_t>(c + 1)] += p * pw;
      next[static_cast<size_t>(c)] += p * (1.0 - pw);
    }
    dp.swap(next);
  }
  out.probs = std::move(dp);
  return out;
}

// ---- scaling and batches ------------------------------------------------------

double scaled_white(double x_n, int64_t n, const MeanValue& mu) {
  if (n < 1) throw DomainError("scaling needs n >= 1");
  return x_n * std::pow(static_cast<double>(n), -mu.scaling_exponent());
}

std::vector<BatchPath> simulate_batch(const UrnConfig& cfg, int64_t paths, uint64_t master_seed,
                                      int threads) {
  validate(cfg);
  if (paths < 0) throw ConfigError("path count must be >= 0");
  std::vector<BatchPath> out(static_cast<size_t>(paths));
  const int nthreads = resolve_threads(threads);
  std::visit(
      [&](const auto& law) {
        parallel_for_index(paths, nthreads, [&](int64_t i) {
          Rng rng = Rng::for_stream(master_seed, static_cast<uint64_t>(i));
          const PathCounts pc = run_path(cfg.b, cfg.w, law, cfg.n, rng);
          out[static_cast<size_t>(i)] = BatchPath{cfg.w + pc.whites_drawn, pc.arrivals};
        });
      },
      cfg.pi.law());
  return out;
}

std::vector<BatchPath> simulate_batch_serial(const UrnConfig& cfg, int64_t paths,
                                             uint64_t master_seed) {
  validate(cfg);
  if (paths < 0) throw ConfigError("path count must be >= 0");
  std::vector<BatchPath> out(static_cast<size_t>(paths));
  std::visit(
      [&](const auto& law) {
        serial_for_index(paths, [&](int64_t i) {
          Rng rng = Rng::for_stream(master_seed, static_cast<uint64_t>(i));
          const PathCounts pc = run_path(cfg.b, cfg.w, law, cfg.n, rng);
          out[static_cast<size_t>(i)] = BatchPath{cfg.w + pc.whites_drawn, pc.arrivals};
        });
      },
      cfg.pi.law());
  return out;
}

// ---- classical urn -------------------------------------------------------------

std::vector<double> classical_polya_pmf(int64_t blacks, int64_t whites, int64_t n) {
  if (blacks < 1 || whites < 1 || n < 0) throw ConfigError("need blacks, whites >= 1, n >= 0");
  const double b = static_cast<double>(blacks);
  const double w = static_cast<double>(whites);
  const double nd = static_cast<double>(n);
  std::vector<double> pmf(static_cast<size_t>(n) + 1);
  const double log_norm = log_gamma(b + w) - log_gamma(b) - log_gamma(w) + log_gamma(nd + 1.0) -
                          log_gamma(b + w + nd);
  double sum = 0.0;
  for (int64_t j = 0; j <= n; ++j) {
    const double jd = static_cast<double>(j);
    const double lp = log_norm + log_gamma(w + jd) - log_gamma(jd + 1.0) +
                      log_gamma(b + nd - jd) - log_gamma(nd - jd + 1.0);
    pmf[static_cast<size_t>(j)] = std::exp(lp);
    sum += pmf[static_cast<size_t>(j)];
  }
  for (double& p : pmf) p /= sum;
  return pmf;
}

namespace {

// P(V <= v) for V ~ Beta(omega, beta) with integer parameters, written as a
// binomial tail so no incomplete-beta routine is needed.
double beta_cdf_int(int64_t omega, int64_t beta, double v) {
  if (v <= 0.0) return 0.0;
  if (v >= 1.0) return 1.0;
  const int64_t m = omega + beta - 1;
  const double lv = std::log(v);
  const double l1v = std::log1p(-v);
  double sum = 0.0;
  for (int64_t j = omega; j <= m; ++j) {
    const double lc = log_gamma(static_cast<double>(m) + 1.0) -
                      log_gamma(static_cast<double>(j) + 1.0) -
                      log_gamma(static_cast<double>(m - j) + 1.0);
    sum += std::exp(lc + static_cast<double>(j) * lv + static_cast<double>(m - j) * l1v);
  }
  return std::min(sum, 1.0);
}

}  // namespace

ClassicalPolyaCoupler::ClassicalPolyaCoupler(int64_t beta_blacks, int64_t omega_whites, int64_t n)
    : beta_(beta_blacks), omega_(omega_whites), n_(n) {
  if (beta_ < 1 || omega_ < 1 || n_ < 0) throw ConfigError("need blacks, whites >= 1, n >= 0");
  const std::vector<double> pmf = classical_polya_pmf(beta_, omega_, n_);
  cum_.resize(pmf.size());
  double running = 0.0;
  for (size_t j = 0; j < pmf.size(); ++j) {
    running += pmf[j];
    cum_[j] = running;
  }
  cum_.back() = 1.0;
  bound_ = static_cast<double>(beta_) * static_cast<double>(4 * omega_ + beta_ + 1);
}

ClassicalPolyaCoupler::Sample ClassicalPolyaCoupler::sample(Rng& rng) const {
  const double u = rng.uniform();
  const auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
  const int64_t white_draws = static_cast<int64_t>(it - cum_.begin());
  Sample s;
  s.q = omega_ + white_draws;
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-14; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (beta_cdf_int(omega_, beta_, mid) < u)
      lo = mid;
    else
      hi = mid;
  }
  s.v = 0.5 * (lo + hi);
  if (std::abs(static_cast<double>(s.q) - static_cast<double>(n_) * s.v) >= bound_)
    throw InternalInconsistency("classical-urn coupling bound violated");
  return s;
}

std::pair<int64_t, double> simulate_classical_polya(int64_t beta_blacks, int64_t omega_whites,
                                                    int64_t n, Rng& rng) {
  const ClassicalPolyaCoupler coupler(beta_blacks, omega_whites, n);
  const auto s = coupler.sample(rng);
  return {s.q, s.v};
}

}  // namespace polya
