#pragma once

#include <utility>

#include "bifrb/types.hpp"

namespace bifrb {

// Bregman kernel h(x) = alpha * sqrt(1 + |x|^2) + (beta / 2) * |x|^2.
// The Euclidean kernel is the degenerate case (alpha = 0, beta = 1).
struct KernelSpec {
  double alpha = 0.0;
  double beta = 1.0;

  KernelSpec() = default;
  KernelSpec(double alpha_, double beta_);

  static KernelSpec euclidean() { return {}; }

  /// Strong convexity modulus sigma = beta.
  double sigma() const { return beta; }

  /// Gradient Lipschitz constant L_h = alpha + beta.
  double lipschitz_grad() const { return alpha + beta; }
};

double kernel_value(const KernelSpec& kernel, const Vector& x);

/// grad h(x) = (alpha / sqrt(1 + |x|^2) + beta) * x.
Vector grad_h(const KernelSpec& kernel, const Vector& x);

// D_h(x, y) = h(x) - h(y) - <x - y, grad h(y)>.  Nonnegative, and
// sandwiched by (sigma/2)|x-y|^2 <= D_h <= (L_h/2)|x-y|^2.  For the
// Euclidean kernel it equals |x - y|^2 / 2 exactly.
double bregman_distance(const KernelSpec& kernel, const Vector& x, const Vector& y);

/// (sigma, L_h) = (beta, alpha + beta).
std::pair<double, double> kernel_bounds(const KernelSpec& kernel);

}  // namespace bifrb
