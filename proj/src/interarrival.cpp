#include "polya/interarrival.hpp"

#include <algorithm>
#include <cmath>

#include "polya/special_functions.hpp"

namespace polya {

namespace {

constexpr size_t kPowerHeadSize = 64;
constexpr double kMassTol = 1e-12;

double power_log_pmf(const PowerLawTauLaw& law, int64_t j) {
  const double g = law.w * (law.beta + 1.0);
  return std::log(law.beta) + log_gamma(g + 1.0) - log_gamma(law.w) +
         log_gamma(law.w + static_cast<double>(j) + 1.0) -
         log_gamma(g + static_cast<double>(j) + 2.0);
}

}  // namespace

double PowerLawTauLaw::log_tail(int64_t j) const {
  const double g = w * (beta + 1.0);
  return log_gamma(g + 1.0) + log_gamma(w + static_cast<double>(j) + 1.0) -
         std::log(w) - log_gamma(w) - log_gamma(g + static_cast<double>(j) + 1.0);
}

int64_t PowerLawTauLaw::sample(Rng& rng) const {
  const double u = rng.uniform();
  if (u <= cum.back()) {
    const auto it = std::lower_bound(cum.begin(), cum.end(), u);
    return static_cast<int64_t>(it - cum.begin());
  }
  // Invert the closed-form tail: smallest j with P(tau >= j+1) <= 1-u.
  const double target = std::log1p(-u);
  int64_t lo = static_cast<int64_t>(cum.size()) - 1;  // known: tail(lo+1) > target
  int64_t hi = 2 * lo;
  while (log_tail(hi + 1) > target) {
    lo = hi;
    hi *= 2;
    if (hi > (int64_t{1} << 60)) return hi;  // beyond any representable mass
  }
  while (hi - lo > 1) {
    const int64_t mid = lo + (hi - lo) / 2;
    if (log_tail(mid + 1) <= target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// ---- factories -------------------------------------------------------------

InterArrival InterArrival::deterministic(int64_t k) {
  if (k < 0) throw ConfigError("deterministic gap must be >= 0");
  if (k == 0) throw DegenerateError("gap identically 0: immigration never pauses");
  return InterArrival(DeterministicLaw{k}, MeanValue::finite(static_cast<double>(k)));
}

InterArrival InterArrival::finite_support(std::vector<std::pair<int64_t, double>> atoms) {
  if (atoms.empty()) throw ConfigError("finite-support law needs at least one atom");
  std::sort(atoms.begin(), atoms.end());
  FiniteSupportLaw law;
  double total = 0.0;
  for (const auto& [v, p] : atoms) {
    if (v < 0) throw ConfigError("gap values must be >= 0");
    if (!(p > 0.0)) throw ConfigError("atom probabilities must be > 0");
    if (!law.values.empty() && law.values.back() == v)
      throw ConfigError("duplicate gap value in atom list");
    law.values.push_back(v);
    law.probs.push_back(p);
    total += p;
  }
  if (std::abs(total - 1.0) > kMassTol)
    throw ConfigError("atom probabilities must sum to 1");
  double running = 0.0;
  double mean = 0.0;
  for (size_t i = 0; i < law.probs.size(); ++i) {
    law.probs[i] /= total;
    running += law.probs[i];
    law.cum.push_back(running);
    mean += static_cast<double>(law.values[i]) * law.probs[i];
  }
  law.cum.back() = 1.0;
  if (law.values[0] == 0 && law.probs[0] >= 1.0 - 1e-15)
    throw DegenerateError("gap is 0 almost surely: immigration never pauses");
  return InterArrival(std::move(law), MeanValue::finite(mean));
}

InterArrival InterArrival::geometric(double p, int start) {
  if (!(p > 0.0) || p > 1.0) throw ConfigError("geometric parameter must be in (0, 1]");
  if (start != 0 && start != 1) throw ConfigError("geometric support must start at 0 or 1");
  if (p >= 1.0 && start == 0)
    throw DegenerateError("gap identically 0: immigration never pauses");
  const double mean = start + (1.0 - p) / p;
  return InterArrival(GeometricLaw{p, start, std::log1p(-p)}, MeanValue::finite(mean));
}

InterArrival InterArrival::power_law(double alpha, double beta, double w) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !(w > 0.0))
    throw ConfigError("power-law parameters must be > 0");
  PowerLawTauLaw law{alpha, beta, w, {}};
  law.cum.reserve(kPowerHeadSize);
  double running = 0.0;
  for (size_t j = 0; j < kPowerHeadSize; ++j) {
    running += std::exp(power_log_pmf(law, static_cast<int64_t>(j)));
    law.cum.push_back(running);
  }
  const MeanValue mean = w * beta > 1.0
                             ? MeanValue::finite((w + 1.0) / (beta * w - 1.0))
                             : MeanValue::infinite();
  return InterArrival(std::move(law), mean);
}

// ---- queries ---------------------------------------------------------------

double InterArrival::pmf(int64_t j) const {
  if (j < 0) return 0.0;
  struct Visitor {
    int64_t j;
    double operator()(const DeterministicLaw& l) const { return j == l.k ? 1.0 : 0.0; }
    double operator()(const FiniteSupportLaw& l) const {
      const auto it = std::lower_bound(l.values.begin(), l.values.end(), j);
      if (it == l.values.end() || *it != j) return 0.0;
      return l.probs[static_cast<size_t>(it - l.values.begin())];
    }
    double operator()(const GeometricLaw& l) const {
      if (j < l.start) return 0.0;
      if (l.p >= 1.0) return j == l.start ? 1.0 : 0.0;
      return l.p * std::exp(static_cast<double>(j - l.start) * l.log_q);
    }
    double operator()(const PowerLawTauLaw& l) const { return std::exp(power_log_pmf(l, j)); }
  };
  return std::visit(Visitor{j}, law_);
}

int64_t InterArrival::sample(Rng& rng) const {
  return std::visit([&rng](const auto& l) { return l.sample(rng); }, law_);
}

bool InterArrival::has_finite_support() const {
  return std::holds_alternative<DeterministicLaw>(law_) ||
         std::holds_alternative<FiniteSupportLaw>(law_);
}

std::vector<std::pair<int64_t, double>> InterArrival::atoms() const {
  if (const auto* det = std::get_if<DeterministicLaw>(&law_))
    return {{det->k, 1.0}};
  if (const auto* fin = std::get_if<FiniteSupportLaw>(&law_)) {
    std::vector<std::pair<int64_t, double>> out;
    out.reserve(fin->values.size());
    for (size_t i = 0; i < fin->values.size(); ++i)
      out.emplace_back(fin->values[i], fin->probs[i]);
    return out;
  }
  throw TooLargeError("law has infinite support; no explicit atom list");
}

// ---- arrival sequences -----------------------------------------------------

int64_t ArrivalSequence::count_up_to(int64_t j) const {
  if (j < 0) return 0;
  if (j > horizon) throw DomainError("count requested beyond the recorded horizon");
  const auto it = std::upper_bound(times.begin(), times.end(), j);
  return static_cast<int64_t>(it - times.begin());
}

std::vector<int64_t> ArrivalSequence::counting() const {
  std::vector<int64_t> n(static_cast<size_t>(horizon) + 1, 0);
  size_t idx = 0;
  int64_t count = 0;
  for (int64_t j = 0; j <= horizon; ++j) {
    while (idx < times.size() && times[idx] <= j) {
      ++count;
      ++idx;
    }
    n[static_cast<size_t>(j)] = count;
  }
  return n;
}

ArrivalSequence ArrivalSequence::from_taus(const std::vector<int64_t>& taus, int64_t horizon) {
  if (horizon < 0) throw DomainError("horizon must be >= 0");
  ArrivalSequence seq;
  seq.horizon = horizon;
  int64_t t = 0;
  for (const int64_t tau : taus) {
    if (tau < 0) throw DomainError("gaps must be >= 0");
    t += tau;
    if (t > horizon) {
      seq.next_after = t;
      return seq;
    }
    seq.times.push_back(t);
  }
  throw DomainError("gap list ends before passing the horizon");
}

ArrivalSequence sample_arrivals(const InterArrival& pi, int64_t horizon, Rng& rng) {
  if (horizon < 0) throw DomainError("horizon must be >= 0");
  ArrivalSequence seq;
  seq.horizon = horizon;
  int64_t t = 0;
  for (;;) {
    t += pi.sample(rng);
    if (t > horizon) {
      seq.next_after = t;
      return seq;
    }
    seq.times.push_back(t);
  }
}

ArrivalEnumeration enumerate_arrivals(const InterArrival& pi, int64_t horizon,
                                      double prune_below) {
  if (horizon < 0) throw DomainError("horizon must be >= 0");
  if (!pi.has_finite_support())
    throw TooLargeError("arrival enumeration needs a finite-support gap law");
  const auto atoms = pi.atoms();
  ArrivalEnumeration out;
  std::vector<int64_t> times;
  // Depth-first over gap choices; a branch ends once the running sum passes
  // the horizon. Zero-gap runs shrink the branch mass geometrically, so the
  // prune threshold keeps the tree finite.
  auto rec = [&](auto&& self, int64_t t, double prob) -> void {
    for (const auto& [v, p] : atoms) {
      const int64_t t2 = t + v;
      const double prob2 = prob * p;
      if (t2 > horizon) {
        out.sequences.push_back(ArrivalSequence{horizon, times, t2});
        out.probs.push_back(prob2);
      } else if (prob2 < prune_below) {
        out.truncated_mass += prob2;
      } else {
        times.push_back(t2);
        self(self, t2, prob2);
        times.pop_back();
      }
    }
  };
  rec(rec, 0, 1.0);
  return out;
}

}  // namespace polya
