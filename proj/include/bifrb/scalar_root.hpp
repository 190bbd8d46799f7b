#pragma once

#include <functional>

namespace bifrb {

// One-dimensional root query for a continuous nondecreasing function with
// value(lo) <= 0 <= value(hi).  An endpoint equal to zero is allowed.
struct RootQuery {
  std::function<double(double)> value;
  std::function<double(double)> derivative;  // optional; enables Newton polish
  double lo = 0.0;
  double hi = 1.0;
  double tol_x = 1e-14;
  double tol_f = 1e-12;
  int max_iter = 200;
};

// Safeguarded bisection with Newton polish.  Returns t in [lo, hi] with
// |value(t)| <= tol_f or bracket width <= tol_x.  A Newton candidate that
// leaves the current bracket is replaced by the bisection midpoint.
// Deterministic for identical inputs.
//
// Throws NoSignChange if the endpoint sign condition fails, MaxIterExceeded
// if neither tolerance is met within max_iter.
double find_root_increasing(const RootQuery& query);

}  // namespace bifrb
