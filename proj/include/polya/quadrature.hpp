#pragma once

#include <functional>

namespace polya {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;  // estimated
  int intervals = 0;
};

// Adaptive Gauss-Kronrod (G7/K15) integration of f over the finite interval
// [lo, hi] to the requested absolute tolerance. Worst-error-first interval
// splitting; throws QuadratureError if the tolerance is not reached within
// max_intervals subintervals.
QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           double abs_tol, int max_intervals = 4000);

// Convenience wrapper targeting a relative tolerance: runs one coarse pass to
// scale the absolute tolerance, then refines.
QuadratureResult integrate_rel(const std::function<double(double)>& f, double lo, double hi,
                               double rel_tol, int max_intervals = 4000);

}  // namespace polya
