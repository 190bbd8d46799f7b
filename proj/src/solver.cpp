#include "bifrb/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <utility>

#include <json.hpp>

#include "bifrb/errors.hpp"

namespace bifrb {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_finite(const Vector& x) {
  if (!x.allFinite()) {
    throw NonFiniteIterate("iterate left the representable range; stepsize is invalid");
  }
}

// Shared body of the BiFRB / iFRB / FRB steps.  When euclidean_prox is set the
// subproblem is solved through prox_{lam f}; otherwise through bregman_prox.
SolverState forward_reflected_step(const SolverState& state, const Problem& problem,
                                   const KernelSpec& kernel, double lambda_k, double alpha_k,
                                   bool euclidean_prox) {
  const Vector y = state.x_cur + state.lambda_cur * (state.grad_prev - state.grad_cur);
  const Vector omega = state.grad_cur + (alpha_k / lambda_k) * (state.x_prev - state.x_cur);
  Vector x_next;
  if (euclidean_prox) {
    x_next = problem.prox_f(y - lambda_k * omega, lambda_k);
  } else {
    x_next = problem.bregman_prox(SubproblemQuery{y, omega, lambda_k, kernel});
  }
  check_finite(x_next);
  const AbcConstants abc =
      abc_constants(kernel.sigma(), kernel.lipschitz_grad(), problem.l_grad_g);

  SolverState next;
  next.x_prev = state.x_cur;
  next.grad_prev = state.grad_cur;
  auto [gval, grad] = problem.g_value_grad(x_next);
  next.gval_cur = gval;
  next.grad_cur = std::move(grad);
  next.x_cur = std::move(x_next);
  next.lambda_prev = state.lambda_cur;
  next.lambda_cur = lambda_k;
  next.merit = next_merit_params(state.merit, state.lambda_cur, lambda_k, alpha_k, abc);
  next.k = state.k + 1;
  next.aux = state.aux;
  next.last = StepContext{y, state.x_prev, alpha_k, lambda_k};
  return next;
}

}  // namespace

std::string method_name(Method method) {
  switch (method) {
    case Method::BiFRB: return "bifrb";
    case Method::iFRB: return "ifrb";
    case Method::FRB: return "frb";
    case Method::DR: return "dr";
    case Method::iTseng: return "itseng";
  }
  return "unknown";
}

std::optional<Method> method_from_name(const std::string& name) {
  if (name == "bifrb") return Method::BiFRB;
  if (name == "ifrb") return Method::iFRB;
  if (name == "frb") return Method::FRB;
  if (name == "dr") return Method::DR;
  if (name == "itseng") return Method::iTseng;
  return std::nullopt;
}

SolverState make_initial_state(const Problem& problem, const Vector& x_init, double lambda_init,
                               double p_initial) {
  SolverState state;
  state.x_prev = x_init;
  state.x_cur = x_init;
  auto [gval, grad] = problem.g_value_grad(x_init);
  state.gval_cur = gval;
  state.grad_prev = grad;
  state.grad_cur = std::move(grad);
  state.lambda_prev = lambda_init;
  state.lambda_cur = lambda_init;
  state.merit = MeritParams::initial(p_initial);
  state.k = 0;
  state.aux = x_init;
  return state;
}

SolverState bifrb_step(const SolverState& state, const Problem& problem, const KernelSpec& kernel,
                       double lambda_k, double alpha_k) {
  return forward_reflected_step(state, problem, kernel, lambda_k, alpha_k, false);
}

SolverState ifrb_step(const SolverState& state, const Problem& problem, double lambda_k,
                      double alpha_k) {
  return forward_reflected_step(state, problem, KernelSpec::euclidean(), lambda_k, alpha_k, true);
}

SolverState frb_step(const SolverState& state, const Problem& problem, double lambda_k) {
  return ifrb_step(state, problem, lambda_k, 0.0);
}

SolverState dr_step(const SolverState& state, const Problem& problem, double gamma) {
  if (!(gamma > 0.0)) throw InvalidBounds("dr_step requires gamma > 0");
  if (!problem.proj_c) throw InvalidBounds("dr_step needs the problem's affine projection");
  const Vector& z = state.aux;
  const Vector y_plus = z + (gamma / (1.0 + gamma)) * (problem.proj_c(z) - z);
  Vector x_plus = problem.prox_f(2.0 * y_plus - z, gamma);
  check_finite(x_plus);

  SolverState next;
  next.x_prev = state.x_cur;
  next.grad_prev = state.grad_cur;
  auto [gval, grad] = problem.g_value_grad(x_plus);
  next.gval_cur = gval;
  next.grad_cur = std::move(grad);
  next.aux = z + x_plus - y_plus;
  next.x_cur = std::move(x_plus);
  next.lambda_prev = state.lambda_cur;
  next.lambda_cur = gamma;
  next.merit = state.merit;
  next.k = state.k + 1;
  next.last = StepContext{Vector(), state.x_prev, 0.0, gamma};
  return next;
}

SolverState itseng_step(const SolverState& state, const Problem& problem, double lambda,
                        double alpha) {
  if (!(lambda > 0.0)) throw InvalidBounds("itseng_step requires lambda > 0");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidBounds("itseng_step requires alpha in [0, 1)");
  const Vector w = state.x_cur + alpha * (state.x_cur - state.x_prev);
  const Vector grad_w = problem.g_value_grad(w).second;
  const Vector p = problem.prox_f(w - lambda * grad_w, lambda);
  const Vector grad_p = problem.g_value_grad(p).second;
  Vector x_next = p + lambda * (grad_w - grad_p);
  check_finite(x_next);

  SolverState next;
  next.x_prev = state.x_cur;
  next.grad_prev = state.grad_cur;
  auto [gval, grad] = problem.g_value_grad(x_next);
  next.gval_cur = gval;
  next.grad_cur = std::move(grad);
  next.x_cur = std::move(x_next);
  next.lambda_prev = state.lambda_cur;
  next.lambda_cur = lambda;
  next.merit = state.merit;
  next.k = state.k + 1;
  next.aux = state.aux;
  next.last = StepContext{Vector(), state.x_prev, alpha, lambda};
  return next;
}

double merit_value(double f_of_x_next, double p, const Vector& x_next, const Vector& x_cur) {
  return f_of_x_next + p * (x_next - x_cur).squaredNorm();
}

StationarityCheck stationarity_residual(const SolverState& state, const Problem& problem,
                                        const KernelSpec& kernel, double p_bar, double lambda_lo,
                                        double lambda_hi) {
  if (!state.last || state.last->y.size() == 0) {
    throw InvalidBounds("stationarity_residual needs a cached y_k from the last step");
  }
  const StepContext& ctx = *state.last;
  const Vector u = (grad_h(kernel, ctx.y) - grad_h(kernel, state.x_cur)) / ctx.lambda -
                   state.grad_prev + (ctx.alpha / ctx.lambda) * (state.x_prev - ctx.x_before_prev);
  const Vector a_vec = u + state.grad_cur + 2.0 * p_bar * (state.x_cur - state.x_prev);
  const Vector b_vec = 2.0 * p_bar * (state.x_prev - state.x_cur);
  const auto [sigma, l_h] = kernel_bounds(kernel);
  (void)sigma;
  const double l_g = problem.l_grad_g;
  const double m2 = std::sqrt(2.0) * std::max(l_h / lambda_lo + l_g + 6.0 * p_bar,
                                              (l_h * l_g * lambda_hi + 1.0) / lambda_lo);
  const double dz = std::sqrt((state.x_cur - state.x_prev).squaredNorm() +
                              (state.x_prev - ctx.x_before_prev).squaredNorm());
  StationarityCheck check;
  check.residual = std::sqrt(a_vec.squaredNorm() + b_vec.squaredNorm());
  check.bound = m2 * dz;
  return check;
}

Trace run_solver(const Problem& problem, Method method, const KernelSpec& kernel,
                 const StepPlan& plan, const RunOptions& options) {
  const Vector x0 = options.x_init ? *options.x_init : Vector(Vector::Zero(problem.dim));
  const bool merit_based =
      method == Method::BiFRB || method == Method::iFRB || method == Method::FRB;
  const double lambda_init = plan.lambda(-1);
  SolverState state = make_initial_state(problem, x0, lambda_init, plan.p_initial);
  const auto alpha_fn = plan.make_alpha_fn();
  const double itseng_lambda =
      options.itseng_lambda > 0.0 ? options.itseng_lambda : 0.95 / (2.0 * problem.l_grad_g);

  Trace trace;
  if (options.keep_iterates) trace.iterates.push_back(x0);
  // H_{p_{-1}}(z_{-1}) with z_{-1} = (x_0, x_{-1}) and x_{-1} = x_0.
  double merit_prev = problem.f_value(x0) + state.gval_cur;
  double step_mult = options.adaptive_stepsize ? 10.0 : 1.0;
  const auto t_start = std::chrono::steady_clock::now();

  for (int k = 0; k < options.termination.max_iter; ++k) {
    const double alpha_k = merit_based ? alpha_fn(k) : 0.0;
    SolverState next;
    switch (method) {
      case Method::BiFRB:
        next = bifrb_step(state, problem, kernel, step_mult * plan.lambda(k), alpha_k);
        break;
      case Method::iFRB:
        next = ifrb_step(state, problem, step_mult * plan.lambda(k), alpha_k);
        break;
      case Method::FRB:
        next = frb_step(state, problem, step_mult * plan.lambda(k));
        break;
      case Method::DR:
        next = dr_step(state, problem, options.dr_gamma);
        break;
      case Method::iTseng:
        next = itseng_step(state, problem, itseng_lambda, options.itseng_alpha);
        break;
    }

    IterationRecord record;
    record.k = k;
    record.objective = problem.f_value(next.x_cur) + next.gval_cur;
    const double dx_new = (next.x_cur - next.x_prev).norm();
    const double dx_old = (next.x_prev - next.last->x_before_prev).norm();
    record.step_norm = std::sqrt(dx_new * dx_new + dx_old * dx_old);
    if (merit_based) {
      record.merit = merit_value(record.objective, next.merit.p_cur, next.x_cur, next.x_prev);
      record.m1 = next.merit.m1_cur;
      record.descent_slack =
          merit_prev - record.merit - record.m1 * record.step_norm * record.step_norm;
      record.stationarity_residual =
          stationarity_residual(next, problem, kernel, next.merit.p_bar, plan.lambda_lo,
                                plan.lambda_hi)
              .residual;
      if (options.adaptive_stepsize && record.descent_slack < 0.0 && step_mult > 1.0) {
        step_mult = std::max(1.0, 0.5 * step_mult);
      }
      merit_prev = record.merit;
    } else {
      record.merit = kNaN;
      record.m1 = kNaN;
      record.descent_slack = kNaN;
      record.stationarity_residual = kNaN;
    }
    record.elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    trace.records.push_back(record);
    if (options.keep_iterates) trace.iterates.push_back(next.x_cur);
    if (options.hook) options.hook(record, next);

    const double denom =
        std::max({1.0, next.x_prev.norm(), next.last->x_before_prev.norm()});
    state = std::move(next);
    if (std::max(dx_new, dx_old) / denom < options.termination.tol) {
      trace.converged = true;
      break;
    }
  }

  trace.x_final = state.x_cur;
  trace.fval_final = problem.f_value(state.x_cur) + state.gval_cur;
  return trace;
}

void write_trace_jsonl(const Trace& trace, std::ostream& out) {
  for (const IterationRecord& r : trace.records) {
    nlohmann::json line{{"k", r.k},
                        {"objective", r.objective},
                        {"merit", r.merit},
                        {"step_norm", r.step_norm},
                        {"m1", r.m1},
                        {"descent_slack", r.descent_slack},
                        {"stationarity_residual", r.stationarity_residual},
                        {"elapsed", r.elapsed}};
    out << line.dump() << '\n';
  }
}

}  // namespace bifrb
