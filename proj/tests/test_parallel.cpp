#include "doctest.h"

#include <cstdlib>
#include <vector>

#include "polya/conditional_moments.hpp"
#include "polya/interarrival.hpp"
#include "polya/parallel.hpp"
#include "polya/pref_attach.hpp"
#include "polya/urn.hpp"

using namespace polya;

TEST_CASE("thread resolution prefers request, then environment, then runtime") {
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(1) == 1);
  setenv("POLYA_THREADS", "5", 1);
  CHECK(resolve_threads(0) == 5);
  CHECK(resolve_threads(2) == 2);  // explicit request still wins
  setenv("POLYA_THREADS", "garbage", 1);
  CHECK(resolve_threads(0) >= 1);
  unsetenv("POLYA_THREADS");
  CHECK(resolve_threads(0) >= 1);
  CHECK(resolve_threads(-4) >= 1);
}

TEST_CASE("parallel loops visit every index exactly once") {
  const int64_t count = 10007;
  std::vector<int> hits(static_cast<size_t>(count), 0);
  parallel_for_index(count, 4, [&](int64_t i) { ++hits[static_cast<size_t>(i)]; });
  for (int h : hits) CHECK(h == 1);
  std::vector<int> serial_hits(static_cast<size_t>(count), 0);
  serial_for_index(count, [&](int64_t i) { ++serial_hits[static_cast<size_t>(i)]; });
  for (int h : serial_hits) CHECK(h == 1);
  parallel_for_index(0, 4, [&](int64_t) { CHECK(false); });
}

TEST_CASE("batch simulation is invariant to thread count") {
  const UrnConfig cfg{1, 2, InterArrival::geometric(0.5, 1), 500};
  const auto serial = simulate_batch_serial(cfg, 400, 42);
  const auto one = simulate_batch(cfg, 400, 42, 1);
  const auto four = simulate_batch(cfg, 400, 42, 4);
  REQUIRE(serial.size() == 400);
  for (size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].x == one[i].x);
    CHECK(serial[i].x == four[i].x);
    CHECK(serial[i].arrivals == four[i].arrivals);
  }
}

TEST_CASE("moment estimation is invariant to thread count") {
  const auto pi = InterArrival::geometric(0.5, 1);
  MomentEstimateOptions opts;
  opts.threads = 1;
  const auto a = estimate_limit_moments(2, 1, 1, pi, 300, 500, 7, opts);
  opts.threads = 4;
  const auto b = estimate_limit_moments(2, 1, 1, pi, 300, 500, 7, opts);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].value == b[i].value);
    CHECK(a[i].std_error == b[i].std_error);
  }
}

TEST_CASE("graph-urn comparison is invariant to thread count") {
  const auto seed = make_seed_graph({1, 1});
  const auto pi = InterArrival::deterministic(1);
  const auto a = correspondence_mc(seed, pi, 1, 200, 500, 3, 1);
  const auto b = correspondence_mc(seed, pi, 1, 200, 500, 3, 4);
  CHECK(a.ks.statistic == b.ks.statistic);
  CHECK(a.ks.p_value == b.ks.p_value);
}

TEST_CASE("repeated runs with one seed are bit-identical") {
  const UrnConfig cfg{2, 1, InterArrival::finite_support({{0, 0.5}, {3, 0.5}}), 200};
  const auto a = simulate_batch(cfg, 300, 9, 2);
  const auto b = simulate_batch(cfg, 300, 9, 2);
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].arrivals == b[i].arrivals);
  }
}
