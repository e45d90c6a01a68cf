// Times the OpenMP kernels against their serial references on identical
// inputs and insists the outputs match exactly; any difference means the
// per-stream isolation contract is broken.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "polya/cli_runner.hpp"
#include "polya/conditional_moments.hpp"
#include "polya/parallel.hpp"
#include "polya/pref_attach.hpp"
#include "polya/rng.hpp"
#include "polya/ul.hpp"
#include "polya/urn.hpp"

namespace {

constexpr uint64_t kSeed = 0x00c0ffee;

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

struct Row {
  const char* name;
  double serial_ms = 0.0;
  double parallel_ms = 0.0;
  double max_delta = 0.0;
};

template <class F>
double timed(F&& f) {
  const double t0 = now_ms();
  f();
  return now_ms() - t0;
}

}  // namespace

int main() {
  using namespace polya;
  const int threads = std::max(2, resolve_threads(0));
  std::vector<Row> rows;

  {
    Row r{"urn batch"};
    const UrnConfig cfg{1, 1, InterArrival::geometric(0.5, 1), 20000};
    std::vector<BatchPath> a, b;
    r.serial_ms = timed([&] { a = simulate_batch_serial(cfg, 2000, kSeed); });
    r.parallel_ms = timed([&] { b = simulate_batch(cfg, 2000, kSeed, threads); });
    for (size_t i = 0; i < a.size(); ++i) {
      r.max_delta = std::max(r.max_delta, std::abs(double(a[i].x - b[i].x)));
      r.max_delta = std::max(r.max_delta, std::abs(double(a[i].arrivals - b[i].arrivals)));
    }
    rows.push_back(r);
  }

  {
    Row r{"scaled moments"};
    const InterArrival pi = InterArrival::geometric(0.5, 1);
    std::vector<MomentEstimate> a, b;
    MomentEstimateOptions o1, o2;
    o1.threads = 1;
    o2.threads = threads;
    r.serial_ms = timed([&] { a = estimate_limit_moments(3, 1, 1, pi, 20000, 500, kSeed, o1); });
    r.parallel_ms =
        timed([&] { b = estimate_limit_moments(3, 1, 1, pi, 20000, 500, kSeed, o2); });
    for (size_t i = 0; i < a.size(); ++i) {
      r.max_delta = std::max(r.max_delta, std::abs(a[i].value - b[i].value));
      r.max_delta = std::max(r.max_delta, std::abs(a[i].std_error - b[i].std_error));
    }
    rows.push_back(r);
  }

  {
    Row r{"graph-urn coupling"};
    const SeedGraph seed = make_seed_graph({1, 1});
    const InterArrival pi = InterArrival::deterministic(1);
    CorrespondenceMc a, b;
    r.serial_ms = timed([&] { a = correspondence_mc(seed, pi, 1, 2000, 500, kSeed, 1); });
    r.parallel_ms = timed([&] { b = correspondence_mc(seed, pi, 1, 2000, 500, kSeed, threads); });
    r.max_delta = std::abs(a.ks.statistic - b.ks.statistic);
    rows.push_back(r);
  }

  {
    Row r{"limit-law sampling"};
    const ULSpec spec = reference_suite()[3].spec;
    const int64_t count = 200000;
    std::vector<double> a(count), b(count);
    const auto body = [&](std::vector<double>& dst) {
      return [&dst, &spec](int64_t i) {
        Rng rng = Rng::for_stream(kSeed, static_cast<uint64_t>(i));
        dst[static_cast<size_t>(i)] = spec.quantile(rng.uniform());
      };
    };
    r.serial_ms = timed([&] { serial_for_index(count, body(a)); });
    r.parallel_ms = timed([&] { parallel_for_index(count, threads, body(b)); });
    for (int64_t i = 0; i < count; ++i)
      r.max_delta = std::max(r.max_delta, std::abs(a[size_t(i)] - b[size_t(i)]));
    rows.push_back(r);
  }

  std::printf("%-20s %12s %12s %10s %10s\n", "kernel", "serial ms", "parallel ms", "speedup",
              "max|delta|");
  bool ok = true;
  for (const auto& r : rows) {
    std::printf("%-20s %12.1f %12.1f %9.2fx %10.3g\n", r.name, r.serial_ms, r.parallel_ms,
                r.serial_ms / std::max(r.parallel_ms, 1e-9), r.max_delta);
    ok = ok && r.max_delta == 0.0;
  }
  if (!ok) {
    std::printf("FAIL: parallel kernels drifted from the serial reference\n");
    return 1;
  }
  std::printf("parallel kernels match the serial reference exactly (%d threads)\n", threads);
  return 0;
}
