#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>

#include <Eigen/Cholesky>
#include <json.hpp>

#include "bifrb/solver.hpp"
#include "bifrb/types.hpp"

namespace bifrb {

enum class BMode { Gaussian, Planted };

std::string b_mode_name(BMode mode);

// Sparse affine feasibility: find x with Ax = b, |x|_0 <= r, |x| <= R,
// modeled as min over D of g = dist^2(., C)/2 with C = {x : Ax = b} and
// D = { |x|_0 <= r, |x| <= R }.  Immutable after generation.
struct FeasibilityInstance {
  Matrix A;
  Vector b;
  int r = 1;
  double radius_R = 1.0;
  std::uint64_t seed = 0;
  BMode b_mode = BMode::Gaussian;
  Vector x_planted;  // empty unless b_mode == Planted
  Eigen::LLT<Matrix> gram;  // Cholesky factor of A A^T, cached once

  int m() const { return static_cast<int>(A.rows()); }
  int n() const { return static_cast<int>(A.cols()); }
};

/// Default sparsity level ceil(m / 5).
int default_sparsity(int m);

// A has i.i.d. standard Gaussian entries from the seeded generator; a rank
// deficient draw is retried with fresh entries (bounded retries).  In planted
// mode b = A x_planted with x_planted r-sparse of norm min(1, radius_R);
// otherwise b is i.i.d. standard Gaussian.  Deterministic for a given seed.
FeasibilityInstance generate_instance(int m, int n, int r, double radius_R, std::uint64_t seed,
                                      BMode b_mode = BMode::Gaussian);

/// Proj_C(x) = x - A^T (A A^T)^{-1} (A x - b).
Vector proj_affine(const FeasibilityInstance& instance, const Vector& x);

/// (dist^2(x, C) / 2, x - Proj_C(x)); the gradient is 1-Lipschitz.
std::pair<double, Vector> g_and_grad(const FeasibilityInstance& instance, const Vector& x);

// Wires the instance into a Problem: the Bregman subproblem binds to
// solve_l0_ball, the Euclidean prox to prox_l0_ball_euclidean, and proj_c to
// proj_affine.  The instance is shared and must outlive the Problem.
Problem make_problem(std::shared_ptr<const FeasibilityInstance> instance);

/// {m, n, r, R, seed, b_mode}; A and b are regenerable from the seed.
nlohmann::json instance_metadata(const FeasibilityInstance& instance);

}  // namespace bifrb
