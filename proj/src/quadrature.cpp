#include "polya/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "polya/errors.hpp"

namespace polya {
namespace {

// 15-point Kronrod nodes on [-1,1] (positive half) and weights, with the
// embedded 7-point Gauss weights on the odd-indexed nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
  double lo, hi, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment eval_gk15(const std::function<double(double)>& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double result_gauss = fc * kWg[3];
  double result_kronrod = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double fsum = f(center - dx) + f(center + dx);
    result_kronrod += kWgk[j] * fsum;
    if (j % 2 == 1) result_gauss += kWg[j / 2] * fsum;
  }
  Segment s;
  s.lo = lo;
  s.hi = hi;
  s.value = result_kronrod * half;
  s.error = std::abs((result_kronrod - result_gauss) * half);
  return s;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           double abs_tol, int max_intervals) {
  if (!(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw DomainError("integrate: bad interval");
  if (hi == lo) return {0.0, 0.0, 0};

  std::priority_queue<Segment> queue;
  Segment first = eval_gk15(f, lo, hi);
  double total_value = first.value;
  double total_error = first.error;
  queue.push(first);
  int count = 1;

  while (total_error > abs_tol && count < max_intervals) {
    Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (mid <= worst.lo || mid >= worst.hi) {
      // interval hit floating-point resolution; keep its error estimate
      queue.push(worst);
      break;
    }
    Segment left = eval_gk15(f, worst.lo, mid);
    Segment right = eval_gk15(f, mid, worst.hi);
    total_value += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++count;
  }

  if (!(total_error <= abs_tol))
    throw QuadratureError("integrate: tolerance " + std::to_string(abs_tol) +
                          " not reached (error " + std::to_string(total_error) + ")");
  if (!std::isfinite(total_value))
    throw QuadratureError("integrate: non-finite result");
  return {total_value, total_error, count};
}

QuadratureResult integrate_rel(const std::function<double(double)>& f, double lo, double hi,
                               double rel_tol, int max_intervals) {
  Segment coarse = eval_gk15(f, lo, hi);
  const double scale = std::max(std::abs(coarse.value), 1e-300);
  QuadratureResult r = integrate(f, lo, hi, rel_tol * scale, max_intervals);
  // One re-run if the coarse magnitude badly underestimated the integral.
  if (std::abs(r.value) > 16.0 * scale)
    r = integrate(f, lo, hi, rel_tol * std::abs(r.value), max_intervals);
  if (std::abs(r.value) > 0 && r.abs_error > 4.0 * rel_tol * std::abs(r.value))
    throw QuadratureError("integrate_rel: relative tolerance not reached");
  return r;
}

}  // namespace polya
