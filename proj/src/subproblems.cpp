#include "bifrb/subproblems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "bifrb/errors.hpp"
#include "bifrb/scalar_root.hpp"

namespace bifrb {

Vector p_lambda(const SubproblemQuery& query) {
  return query.lambda * query.omega - grad_h(query.kernel, query.u);
}

Vector hard_threshold(const Vector& x, int r) {
  const int n = static_cast<int>(x.size());
  if (r < 1 || r > n) throw InvalidRank("hard_threshold rank must satisfy 1 <= r <= dim");
  if (r == n) return x;
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::partial_sort(idx.begin(), idx.begin() + r, idx.end(), [&x](int i, int j) {
    const double ai = std::abs(x[i]);
    const double aj = std::abs(x[j]);
    if (ai != aj) return ai > aj;
    return i < j;  // tie: lowest index wins
  });
  Vector out = Vector::Zero(n);
  for (int k = 0; k < r; ++k) out[idx[k]] = x[idx[k]];
  return out;
}

Vector soft_threshold(const Vector& x, double lam) {
  if (lam < 0.0) throw InvalidBounds("soft_threshold requires lam >= 0");
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double mag = std::abs(x[i]) - lam;
    out[i] = mag > 0.0 ? std::copysign(mag, x[i]) : 0.0;
  }
  return out;
}

Vector project_l1_ball(const Vector& x, double radius) {
  if (!(radius > 0.0)) throw InvalidBounds("project_l1_ball requires radius > 0");
  if (x.lpNorm<1>() <= radius) return x;
  // Sort |x| descending, find the KKT threshold theta with
  // sum_i max(|x_i| - theta, 0) = radius.
  std::vector<double> mags(x.data(), x.data() + x.size());
  for (double& m : mags) m = std::abs(m);
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < mags.size(); ++j) {
    cumulative += mags[j];
    const double candidate = (cumulative - radius) / static_cast<double>(j + 1);
    if (j + 1 == mags.size() || mags[j + 1] <= candidate) {
      theta = candidate;
      break;
    }
  }
  return soft_threshold(x, theta);
}

Vector prox_linf(const Vector& z, double lam) {
  if (lam < 0.0) throw InvalidBounds("prox_linf requires lam >= 0");
  if (lam == 0.0) return z;
  return z - lam * project_l1_ball(z / lam, 1.0);
}

Vector solve_l0_ball(const SubproblemQuery& query, int r, double radius_R) {
  if (!(radius_R > 0.0)) throw InvalidBounds("solve_l0_ball requires radius_R > 0");
  const Vector p = p_lambda(query);
  Vector hp = hard_threshold(p, r);
  const double nh = hp.norm();
  if (nh == 0.0) return Vector::Zero(p.size());  // grad h(u) = lambda * omega
  const double alpha = query.kernel.alpha;
  const double beta = query.kernel.beta;
  double t_star;
  if (nh >= alpha / std::hypot(1.0, radius_R) + beta * radius_R) {
    t_star = radius_R;  // ball boundary is active
  } else if (alpha == 0.0) {
    t_star = nh / beta;
  } else {
    RootQuery root;
    root.value = [&](double t) { return alpha * t / std::hypot(1.0, t) + beta * t - nh; };
    root.derivative = [&](double t) {
      const double s = std::hypot(1.0, t);
      return alpha / (s * s * s) + beta;
    };
    root.lo = 0.0;
    root.hi = radius_R;
    t_star = find_root_increasing(root);
  }
  hp *= -t_star / nh;
  return hp;
}

HomogeneousSolution solve_homogeneous_detailed(const SubproblemQuery& query, const ProxFn& prox_f) {
  const Vector p = p_lambda(query);
  Vector v = prox_f(-p, query.lambda);
  const double alpha = query.kernel.alpha;
  const double beta = query.kernel.beta;
  const double nv2 = v.squaredNorm();
  if (nv2 == 0.0) {
    return {Vector::Zero(p.size()), 1.0 / (alpha + beta), std::move(v)};
  }
  double t_star;
  if (alpha == 0.0) {
    t_star = 1.0 / beta;
  } else {
    // Increasing form of the scaling equation; its root lies in (0, 1/beta].
    RootQuery root;
    root.value = [&](double t) { return alpha * t / std::sqrt(1.0 + t * t * nv2) + beta * t - 1.0; };
    root.derivative = [&](double t) {
      const double s2 = 1.0 + t * t * nv2;
      return alpha / (s2 * std::sqrt(s2)) + beta;
    };
    root.lo = 0.0;
    root.hi = 1.0 / beta;
    t_star = find_root_increasing(root);
  }
  return {t_star * v, t_star, std::move(v)};
}

Vector solve_homogeneous(const SubproblemQuery& query, const ProxFn& prox_f) {
  return solve_homogeneous_detailed(query, prox_f).x;
}

Vector prox_l0_ball_euclidean(const Vector& z, int r, double radius_R) {
  if (!(radius_R > 0.0)) throw InvalidBounds("prox_l0_ball_euclidean requires radius_R > 0");
  Vector hz = hard_threshold(z, r);
  const double nh = hz.norm();
  if (nh == 0.0) return hz;
  if (nh > radius_R) hz *= radius_R / nh;
  return hz;
}

}  // namespace bifrb
