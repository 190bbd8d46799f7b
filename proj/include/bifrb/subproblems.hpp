#pragma once

#include <functional>

#include "bifrb/kernel.hpp"
#include "bifrb/types.hpp"

namespace bifrb {

// One Bregman proximal subproblem
//   T(u) = argmin_x { f(x) + <x - u, omega> + (1/lambda) D_h(x, u) },
// with u the base point, omega the linear term and lambda > 0 the stepsize.
struct SubproblemQuery {
  Vector u;
  Vector omega;
  double lambda = 1.0;
  KernelSpec kernel;
};

/// p(u) = lambda * omega - grad h(u); the subproblem's reduced linear term.
Vector p_lambda(const SubproblemQuery& query);

// Keeps the r largest-magnitude coordinates, zeroes the rest.  Magnitude ties
// are broken toward the lowest index so results are deterministic.  Positively
// homogeneous: H_r(c x) = c H_r(x).
Vector hard_threshold(const Vector& x, int r);

/// Componentwise shrinkage max(|x_i| - lam, 0) * sgn(x_i).
Vector soft_threshold(const Vector& x, double lam);

/// Euclidean projection onto { z : |z|_1 <= radius } by the sort-and-shift rule.
Vector project_l1_ball(const Vector& x, double radius);

/// prox of lam * |.|_inf via the Moreau identity: z - lam * Proj(z / lam; l1 ball).
Vector prox_linf(const Vector& z, double lam);

// Solves T(u) for f the indicator of D = { |x|_0 <= r, |x| <= radius_R }.
// Returns 0 when p(u) = 0; otherwise -t* H_r(p) / |H_r(p)| where t* = radius_R
// when |H_r(p)| >= alpha (1 + R^2)^{-1/2} + beta R, else t* is the unique root
// in (0, R) of alpha t (1 + t^2)^{-1/2} + beta t = |H_r(p)|.
Vector solve_l0_ball(const SubproblemQuery& query, int r, double radius_R);

// Euclidean proximal map handle: (z, lam) -> prox_{lam f}(z).
using ProxFn = std::function<Vector(const Vector&, double)>;

struct HomogeneousSolution {
  Vector x;          // t_star * direction
  double t_star;     // 1 / (alpha + beta) when the prox point vanishes
  Vector direction;  // prox_{lambda f}(-p(u))
};

// Solves T(u) for f proper, lsc, convex and positively homogeneous, given its
// exact Euclidean proximal map.  T(u) = t* v with v = prox_{lambda f}(-p(u))
// and t* the unique root of 1 - alpha t (1 + t^2 |v|^2)^{-1/2} - beta t = 0.
HomogeneousSolution solve_homogeneous_detailed(const SubproblemQuery& query, const ProxFn& prox_f);
Vector solve_homogeneous(const SubproblemQuery& query, const ProxFn& prox_f);

// Euclidean prox of the indicator of D = { |x|_0 <= r, |x| <= radius_R }:
// hard-threshold, then radial scaling by min(1, radius_R / |H_r(z)|).
Vector prox_l0_ball_euclidean(const Vector& z, int r, double radius_R);

}  // namespace bifrb
