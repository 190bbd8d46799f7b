#pragma once

// Test-only oracles, kept independent of the library code paths they check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "bifrb/types.hpp"

namespace oracles {

// Plain bisection on an increasing function; no Newton, no secant.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-12, int iters = 200) {
  double a = lo, b = hi;
  for (int i = 0; i < iters && b - a > tol; ++i) {
    const double mid = 0.5 * (a + b);
    if (f(mid) > 0.0) {
      b = mid;
    } else {
      a = mid;
    }
  }
  return 0.5 * (a + b);
}

inline double central_difference(const std::function<double(double)>& f, double t,
                                 double h = 1e-6) {
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

// Directional finite difference of a scalar field at x along unit direction d.
inline double directional_difference(const std::function<double(const bifrb::Vector&)>& f,
                                     const bifrb::Vector& x, const bifrb::Vector& d,
                                     double h = 1e-6) {
  return (f(x + h * d) - f(x - h * d)) / (2.0 * h);
}

// Subproblem objective <x, p> + alpha sqrt(1 + |x|^2) + (beta/2)|x|^2, the
// reduced form whose argmin over D the sparse solver returns.
inline double l0_objective(const bifrb::Vector& p, double alpha, double beta,
                           const bifrb::Vector& x) {
  const double nx2 = x.squaredNorm();
  return x.dot(p) + alpha * std::sqrt(1.0 + nx2) + 0.5 * beta * nx2;
}

// Exhaustive minimization over D = { |x|_0 <= r, |x| <= R }: enumerate every
// support of size <= r, restrict to the radial direction -p_S / |p_S| (optimal
// for fixed support and norm), and grid the radius.  Exact up to grid
// resolution; meant for small n only.
inline double l0_brute_force(const bifrb::Vector& p, double alpha, double beta, int r, double R,
                             int grid_points = 100000) {
  const int n = static_cast<int>(p.size());
  double best = alpha;  // x = 0
  std::vector<int> support;
  const std::function<void(int)> recurse = [&](int from) {
    if (!support.empty()) {
      double norm2 = 0.0;
      for (int j : support) norm2 += p[j] * p[j];
      const double np = std::sqrt(norm2);
      // phi(t) = -t |p_S| + alpha sqrt(1 + t^2) + (beta/2) t^2 on [0, R]
      for (int g = 0; g <= grid_points; ++g) {
        const double t = R * static_cast<double>(g) / grid_points;
        const double value = -t * np + alpha * std::sqrt(1.0 + t * t) + 0.5 * beta * t * t;
        best = std::min(best, value);
      }
    }
    if (static_cast<int>(support.size()) == r) return;
    for (int j = from; j < n; ++j) {
      support.push_back(j);
      recurse(j + 1);
      support.pop_back();
    }
  };
  recurse(0);
  return best;
}

// Projection onto the l1 ball by bisecting the threshold theta, an
// independent route from the library's sort-and-shift rule.
inline bifrb::Vector project_l1_bisect(const bifrb::Vector& x, double radius) {
  if (x.lpNorm<1>() <= radius) return x;
  const auto excess = [&](double theta) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) total += std::max(std::abs(x[i]) - theta, 0.0);
    return total - radius;
  };
  double lo = 0.0, hi = x.cwiseAbs().maxCoeff();
  for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double theta = 0.5 * (lo + hi);
  bifrb::Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double mag = std::max(std::abs(x[i]) - theta, 0.0);
    out[i] = std::copysign(mag, x[i]);
  }
  return out;
}

inline bifrb::Vector random_vector(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  bifrb::Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = gauss(rng);
  return x;
}

}  // namespace oracles
