#include "polya/conditional_moments.hpp"

#include <algorithm>
#include <cmath>

#include "polya/errors.hpp"
#include "polya/parallel.hpp"
#include "polya/special_functions.hpp"

namespace polya {

namespace {

void check_moment_args(int k, int64_t n, double b, double w) {
  if (k < 1) throw DomainError("moment order must be >= 1");
  if (n < 1) throw DomainError("draw count must be >= 1");
  if (!(b > 0.0) || !(w > 0.0)) throw DomainError("need b > 0 and w > 0");
}

// Compensated accumulator; the product forms sum 10^5+ small log terms and the
// two evaluation routes are compared at 1e-10.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

std::vector<double> log_rising_factorial_moments_given_T(int k_max, int64_t n, double b,
                                                         double w, const ArrivalSequence& seq) {
  check_moment_args(k_max, n, b, w);
  if (seq.horizon < n - 1) throw DomainError("arrival sequence horizon shorter than n-1");
  std::vector<KahanSum> acc(static_cast<size_t>(k_max));
  size_t arrival_idx = 0;
  int64_t count = 0;
  for (int64_t j = 0; j < n; ++j) {
    while (arrival_idx < seq.times.size() && seq.times[arrival_idx] <= j) {
      ++count;
      ++arrival_idx;
    }
    const double base = b + w + static_cast<double>(j) + static_cast<double>(count);
    const double log_base = std::log(base);
    for (int k = 1; k <= k_max; ++k)
      acc[static_cast<size_t>(k - 1)].add(std::log(base + k) - log_base);
  }
  std::vector<double> out(static_cast<size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    const double head = log_gamma(w + k) - log_gamma(w);
    out[static_cast<size_t>(k - 1)] = head + acc[static_cast<size_t>(k - 1)].sum;
  }
  return out;
}

double log_rising_factorial_moment_gamma_form(int k, int64_t n, double b, double w,
                                              const ArrivalSequence& seq) {
  check_moment_args(k, n, b, w);
  if (seq.horizon < n - 1) throw DomainError("arrival sequence horizon shorter than n-1");
  const int64_t count = seq.count_up_to(n - 1);
  const double kd = static_cast<double>(k);
  double log_val = log_gamma(w + kd) - log_gamma(w) + log_gamma(b + w) - log_gamma(b + w + kd) +
                   log_gamma(b + w + static_cast<double>(count + n) + kd) -
                   log_gamma(b + w + static_cast<double>(count + n));
  KahanSum acc;
  for (int64_t j = 1; j <= count; ++j) {
    const double t = static_cast<double>(seq.times[static_cast<size_t>(j - 1)]);
    const double base = b + w + static_cast<double>(j) - 1.0 + t;
    acc.add(std::log(base) - std::log(base + kd));
  }
  return log_val + acc.sum;
}

double rising_factorial_moment_given_T(int k, int64_t n, double b, double w,
                                       const ArrivalSequence& seq) {
  const double lp = log_rising_factorial_moments_given_T(k, n, b, w, seq)[static_cast<size_t>(k - 1)];
  const double lg = log_rising_factorial_moment_gamma_form(k, n, b, w, seq);
  if (std::abs(lp - lg) > 1e-10)
    throw InternalInconsistency("conditional moment product and gamma forms disagree");
  return std::exp(lp);
}

std::vector<double> factorial_to_raw(const std::vector<double>& factorial_moments) {
  const int k_max = static_cast<int>(factorial_moments.size());
  std::vector<double> raw(factorial_moments.size());
  for (int k = 1; k <= k_max; ++k) {
    const std::vector<int64_t> row = stirling_first_row(k);
    double v = factorial_moments[static_cast<size_t>(k - 1)];
    for (int i = 1; i < k; ++i)
      v -= static_cast<double>(row[static_cast<size_t>(i)]) * raw[static_cast<size_t>(i - 1)];
    raw[static_cast<size_t>(k - 1)] = v;
  }
  return raw;
}

namespace {

struct PathMoments {
  std::vector<double> scaled_factorial;
  std::vector<double> scaled_raw;
};

PathMoments path_moments(int k_max, int64_t n, double b, double w, const ArrivalSequence& seq,
                         double exponent) {
  const std::vector<double> logs = log_rising_factorial_moments_given_T(k_max, n, b, w, seq);
  std::vector<double> fact(logs.size());
  for (size_t i = 0; i < logs.size(); ++i) fact[i] = std::exp(logs[i]);
  const std::vector<double> raw = factorial_to_raw(fact);
  const double log_n = std::log(static_cast<double>(n));
  PathMoments out;
  out.scaled_factorial.resize(logs.size());
  out.scaled_raw.resize(logs.size());
  for (int k = 1; k <= k_max; ++k) {
    const double scale = std::exp(-static_cast<double>(k) * exponent * log_n);
    out.scaled_factorial[static_cast<size_t>(k - 1)] =
        std::exp(logs[static_cast<size_t>(k - 1)] - static_cast<double>(k) * exponent * log_n);
    out.scaled_raw[static_cast<size_t>(k - 1)] = raw[static_cast<size_t>(k - 1)] * scale;
  }
  return out;
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe column_mean_se(const std::vector<double>& values) {
  const size_t m = values.size();
  KahanSum s;
  for (const double v : values) s.add(v);
  const double mean = s.sum / static_cast<double>(m);
  if (m < 2) return {mean, 0.0};
  KahanSum sq;
  for (const double v : values) sq.add((v - mean) * (v - mean));
  return {mean, std::sqrt(sq.sum / (static_cast<double>(m) * static_cast<double>(m - 1)))};
}

double bootstrap_se(const std::vector<double>& values, int resamples, Rng& rng) {
  const size_t m = values.size();
  std::vector<double> means(static_cast<size_t>(resamples));
  for (int r = 0; r < resamples; ++r) {
    KahanSum s;
    for (size_t i = 0; i < m; ++i) {
      const size_t idx = static_cast<size_t>(rng.uniform() * static_cast<double>(m));
      s.add(values[std::min(idx, m - 1)]);
    }
    means[static_cast<size_t>(r)] = s.sum / static_cast<double>(m);
  }
  const MeanSe ms = column_mean_se(means);
  return ms.se * std::sqrt(static_cast<double>(resamples));
}

}  // namespace

std::vector<MomentEstimate> estimate_limit_moments(int k_max, int64_t b, int64_t w,
                                                   const InterArrival& pi, int64_t n,
                                                   int64_t paths, uint64_t master_seed,
                                                   const MomentEstimateOptions& opts) {
  check_moment_args(k_max, n, static_cast<double>(b), static_cast<double>(w));
  if (paths < 1) throw ConfigError("need at least one path");
  const double exponent = pi.scaling_exponent();
  const int64_t horizon = n - 1;

  // Column-major per-path values: k_max factorial columns then k_max raw ones.
  std::vector<std::vector<double>> cols(2 * static_cast<size_t>(k_max));

  if (std::holds_alternative<DeterministicLaw>(pi.law())) {
    // Every path sees the same arrival times; evaluate once.
    const auto& det = std::get<DeterministicLaw>(pi.law());
    std::vector<int64_t> taus(static_cast<size_t>(horizon / det.k + 2), det.k);
    const ArrivalSequence seq = ArrivalSequence::from_taus(taus, horizon);
    const PathMoments pm =
        path_moments(k_max, n, static_cast<double>(b), static_cast<double>(w), seq, exponent);
    for (int k = 0; k < k_max; ++k) {
      cols[static_cast<size_t>(k)].assign(1, pm.scaled_factorial[static_cast<size_t>(k)]);
      cols[static_cast<size_t>(k_max + k)].assign(1, pm.scaled_raw[static_cast<size_t>(k)]);
    }
  } else {
    for (auto& c : cols) c.resize(static_cast<size_t>(paths));
    const int nthreads = resolve_threads(opts.threads);
    parallel_for_index(paths, nthreads, [&](int64_t i) {
      Rng rng = Rng::for_stream(master_seed, static_cast<uint64_t>(i));
      const ArrivalSequence seq = sample_arrivals(pi, horizon, rng);
      const PathMoments pm =
          path_moments(k_max, n, static_cast<double>(b), static_cast<double>(w), seq, exponent);
      for (int k = 0; k < k_max; ++k) {
        cols[static_cast<size_t>(k)][static_cast<size_t>(i)] =
            pm.scaled_factorial[static_cast<size_t>(k)];
        cols[static_cast<size_t>(k_max + k)][static_cast<size_t>(i)] =
            pm.scaled_raw[static_cast<size_t>(k)];
      }
    });
  }

  std::vector<MomentEstimate> out;
  out.reserve(cols.size());
  Rng boot_rng = Rng::for_stream(master_seed, static_cast<uint64_t>(paths));
  for (size_t c = 0; c < cols.size(); ++c) {
    const MeanSe ms = column_mean_se(cols[c]);
    MomentEstimate est;
    est.k = static_cast<int>(c % static_cast<size_t>(k_max)) + 1;
    est.kind = c < static_cast<size_t>(k_max) ? MomentKind::factorial : MomentKind::raw;
    est.value = ms.mean;
    est.std_error = ms.se;
    if (opts.bootstrap && cols[c].size() > 1)
      est.std_error = bootstrap_se(cols[c], opts.bootstrap_resamples, boot_rng);
    est.paths = static_cast<int64_t>(cols[c].size());
    est.horizon = n;
    out.push_back(est);
  }
  return out;
}

}  // namespace polya
