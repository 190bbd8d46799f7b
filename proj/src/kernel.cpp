#include "bifrb/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "bifrb/errors.hpp"

namespace bifrb {

KernelSpec::KernelSpec(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
  if (!(alpha >= 0.0) || !(beta > 0.0)) {
    throw InvalidBounds("KernelSpec requires alpha >= 0 and beta > 0");
  }
}

double kernel_value(const KernelSpec& kernel, const Vector& x) {
  // stableNorm + hypot keep sqrt(1 + |x|^2) finite up to |x| ~ 1e308.
  const double nx = x.stableNorm();
  return kernel.alpha * std::hypot(1.0, nx) + 0.5 * kernel.beta * nx * nx;
}

Vector grad_h(const KernelSpec& kernel, const Vector& x) {
  const double nx = x.stableNorm();
  return (kernel.alpha / std::hypot(1.0, nx) + kernel.beta) * x;
}

double bregman_distance(const KernelSpec& kernel, const Vector& x, const Vector& y) {
  // D_h is additive in h = alpha * p + (beta/2)|.|^2 with p = sqrt(1 + |.|^2).
  // The quadratic part contributes exactly (beta/2)|x-y|^2, so only the
  // sqrt part needs the three-term formula.
  const double quad = 0.5 * kernel.beta * (x - y).squaredNorm();
  if (kernel.alpha == 0.0) return quad;
  const double py = std::hypot(1.0, y.stableNorm());
  const double px = std::hypot(1.0, x.stableNorm());
  const double sqrt_part = px - py - (x - y).dot(y) / py;
  return std::max(0.0, kernel.alpha * sqrt_part + quad);
}

std::pair<double, double> kernel_bounds(const KernelSpec& kernel) {
  return {kernel.beta, kernel.alpha + kernel.beta};
}

}  // namespace bifrb
