#include "bifrb/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "bifrb/errors.hpp"
#include "bifrb/subproblems.hpp"

namespace bifrb {

namespace {

constexpr int kMaxRegenerate = 8;

bool factor_ok(const Eigen::LLT<Matrix>& llt, int m) {
  if (llt.info() != Eigen::Success) return false;
  const auto diag = llt.matrixLLT().diagonal().head(m);
  return diag.minCoeff() > 1e-10 * diag.maxCoeff();
}

bool in_sparse_ball(const Vector& x, int r, double radius_R) {
  int nonzeros = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) ++nonzeros;
  }
  // Radial scaling can land a hair outside the ball in floating point.
  return nonzeros <= r && x.norm() <= radius_R * (1.0 + 1e-9);
}

}  // namespace

std::string b_mode_name(BMode mode) { return mode == BMode::Planted ? "planted" : "gaussian"; }

int default_sparsity(int m) { return (m + 4) / 5; }

FeasibilityInstance generate_instance(int m, int n, int r, double radius_R, std::uint64_t seed,
                                      BMode b_mode) {
  if (!(m >= 1 && m < n)) throw InvalidBounds("generate_instance requires 1 <= m < n");
  if (r < 1 || r > n) throw InvalidRank("generate_instance requires 1 <= r <= n");
  if (!(radius_R > 0.0)) throw InvalidBounds("generate_instance requires radius_R > 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (int attempt = 0; attempt < kMaxRegenerate; ++attempt) {
    FeasibilityInstance inst;
    inst.r = r;
    inst.radius_R = radius_R;
    inst.seed = seed;
    inst.b_mode = b_mode;
    inst.A.resize(m, n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) inst.A(i, j) = gauss(rng);
    }
    if (b_mode == BMode::Planted) {
      std::set<int> support;
      std::uniform_int_distribution<int> pick(0, n - 1);
      while (static_cast<int>(support.size()) < r) support.insert(pick(rng));
      inst.x_planted = Vector::Zero(n);
      for (int j : support) inst.x_planted[j] = gauss(rng);
      inst.x_planted *= std::min(1.0, radius_R) / inst.x_planted.norm();
      inst.b = inst.A * inst.x_planted;
    } else {
      inst.b.resize(m);
      for (int i = 0; i < m; ++i) inst.b[i] = gauss(rng);
    }
    inst.gram.compute(inst.A * inst.A.transpose());
    if (factor_ok(inst.gram, m)) return inst;
  }
  throw RankDeficient("generate_instance: rank-deficient draws beyond the retry budget");
}

Vector proj_affine(const FeasibilityInstance& instance, const Vector& x) {
  return x - instance.A.transpose() * instance.gram.solve(instance.A * x - instance.b);
}

std::pair<double, Vector> g_and_grad(const FeasibilityInstance& instance, const Vector& x) {
  Vector grad = x - proj_affine(instance, x);
  const double value = 0.5 * grad.squaredNorm();
  return {value, std::move(grad)};
}

Problem make_problem(std::shared_ptr<const FeasibilityInstance> instance) {
  Problem problem;
  problem.dim = instance->n();
  problem.l_grad_g = 1.0;
  problem.f_value = [instance](const Vector& x) {
    return in_sparse_ball(x, instance->r, instance->radius_R)
               ? 0.0
               : std::numeric_limits<double>::infinity();
  };
  problem.g_value_grad = [instance](const Vector& x) { return g_and_grad(*instance, x); };
  problem.bregman_prox = [instance](const SubproblemQuery& query) {
    return solve_l0_ball(query, instance->r, instance->radius_R);
  };
  problem.prox_f = [instance](const Vector& z, double) {
    return prox_l0_ball_euclidean(z, instance->r, instance->radius_R);
  };
  problem.proj_c = [instance](const Vector& x) { return proj_affine(*instance, x); };
  return problem;
}

nlohmann::json instance_metadata(const FeasibilityInstance& instance) {
  return nlohmann::json{{"m", instance.m()},          {"n", instance.n()},
                        {"r", instance.r},            {"R", instance.radius_R},
                        {"seed", instance.seed},      {"b_mode", b_mode_name(instance.b_mode)}};
}

}  // namespace bifrb
