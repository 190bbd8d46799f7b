#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bifrb/kernel.hpp"
#include "bifrb/params.hpp"
#include "bifrb/subproblems.hpp"
#include "bifrb/types.hpp"

namespace bifrb {

enum class Method { BiFRB, iFRB, FRB, DR, iTseng };

std::string method_name(Method method);
std::optional<Method> method_from_name(const std::string& name);

// Composite problem F = f + g.  g is smooth with l_grad_g-Lipschitz gradient;
// f is prox-friendly.  bregman_prox solves the kernel subproblem for the
// query's kernel; prox_f is the Euclidean proximal map of lambda * f.
// proj_c is optional and only consumed by the Douglas-Rachford baseline.
struct Problem {
  int dim = 0;
  double l_grad_g = 1.0;
  std::function<double(const Vector&)> f_value;
  std::function<std::pair<double, Vector>(const Vector&)> g_value_grad;
  std::function<Vector(const SubproblemQuery&)> bregman_prox;
  ProxFn prox_f;
  std::function<Vector(const Vector&)> proj_c;

  double objective(const Vector& x) const { return f_value(x) + g_value_grad(x).first; }
};

// Details of the step that produced x_cur; needed by the stationarity
// diagnostics and the termination rule.
struct StepContext {
  Vector y;              // reflected base point y_k (empty for DR / Tseng)
  Vector x_before_prev;  // x_{k-1} at step time
  double alpha = 0.0;
  double lambda = 0.0;
};

// Two-iterate window with cached gradients.  lambda_cur is the stepsize that
// produced x_cur; lambda_prev the one before it.
struct SolverState {
  Vector x_prev, x_cur;
  Vector grad_prev, grad_cur;
  double gval_cur = 0.0;  // g(x_cur), cached with the gradient
  double lambda_prev = 0.0, lambda_cur = 0.0;
  MeritParams merit;
  int k = 0;  // index of the next step
  Vector aux; // Douglas-Rachford governing variable
  std::optional<StepContext> last;
};

SolverState make_initial_state(const Problem& problem, const Vector& x_init, double lambda_init,
                               double p_initial);

// One Bregman forward-reflected step:
//   y_k     = x_k + lam_{k-1} (grad g(x_{k-1}) - grad g(x_k))
//   omega_k = grad g(x_k) + (alpha_k / lam_k) (x_{k-1} - x_k)
//   x_{k+1} = argmin f + <. - y_k, omega_k> + D_h(., y_k) / lam_k
// Merit parameters advance alongside the window.
SolverState bifrb_step(const SolverState& state, const Problem& problem, const KernelSpec& kernel,
                       double lambda_k, double alpha_k);

// Euclidean variant: the subproblem collapses to prox_{lam f}(y_k - lam omega_k).
SolverState ifrb_step(const SolverState& state, const Problem& problem, double lambda_k,
                      double alpha_k);

/// ifrb_step with zero inertia.
SolverState frb_step(const SolverState& state, const Problem& problem, double lambda_k);

// One Douglas-Rachford sweep on f + g with g = dist^2(., C)/2:
//   y+ = z + (gamma / (1 + gamma)) (Proj_C(z) - z)
//   x+ = prox_{gamma f}(2 y+ - z),  z+ = z + x+ - y+
// The reported iterate is x+.
SolverState dr_step(const SolverState& state, const Problem& problem, double gamma);

// One inertial Tseng sweep:
//   w = x_k + alpha (x_k - x_{k-1}); p = prox_{lam f}(w - lam grad g(w));
//   x_{k+1} = p + lam (grad g(w) - grad g(p))
SolverState itseng_step(const SolverState& state, const Problem& problem, double lambda,
                        double alpha);

/// H_p(x_next, x_cur) = F_value + p |x_next - x_cur|^2.
double merit_value(double f_of_x_next, double p, const Vector& x_next, const Vector& x_cur);

struct StationarityCheck {
  double residual = 0.0;  // |(A_k, B_k)|
  double bound = 0.0;     // M_2 |z_k - z_{k-1}|
};

// Subgradient-based stationarity diagnostic evaluated right after a step.
// With u_k = (grad h(y_k) - grad h(x_{k+1})) / lam_k - grad g(x_k)
//          + alpha_k (x_k - x_{k-1}) / lam_k  (an element of partial f(x_{k+1})),
//   A_k = u_k + grad g(x_{k+1}) + 2 p (x_{k+1} - x_k),  B_k = 2 p (x_k - x_{k+1}),
// and M_2 = sqrt(2) max(L_h / lam_lo + L_g + 6p, (L_h L_g lam_hi + 1) / lam_lo).
StationarityCheck stationarity_residual(const SolverState& state_after_step,
                                        const Problem& problem, const KernelSpec& kernel,
                                        double p_bar, double lambda_lo, double lambda_hi);

struct IterationRecord {
  int k = 0;
  double objective = 0.0;              // F(x_{k+1})
  double merit = 0.0;                  // H_{p_k}(z_k)
  double step_norm = 0.0;              // |z_k - z_{k-1}|
  double m1 = 0.0;                     // M_{1,k}
  double descent_slack = 0.0;          // H_{p_{k-1}}(z_{k-1}) - H_{p_k}(z_k) - M_{1,k} |dz|^2
  double stationarity_residual = 0.0;  // |(A_k, B_k)| at p = running p_bar
  double elapsed = 0.0;                // seconds since the run started
};

// Relative successive-change rule:
//   max(|x_{k+1} - x_k|, |x_k - x_{k-1}|) / max(1, |x_k|, |x_{k-1}|) < tol.
struct TerminationSpec {
  double tol = 1e-10;
  int max_iter = 10001;
};

struct RunOptions {
  TerminationSpec termination;
  std::optional<Vector> x_init;  // default: the origin
  bool keep_iterates = false;    // store x_0, x_1, ... in the trace
  // Multiplicative stepsize heuristic: start at 10x the planned stepsize and
  // halve on a failed descent check, flooring at the planned value.  Off by
  // default so runs match the certified theory exactly.
  bool adaptive_stepsize = false;
  double dr_gamma = 0.5;
  double itseng_lambda = -1.0;  // < 0: use 0.95 / (2 l_grad_g)
  double itseng_alpha = 0.49;
  std::function<void(const IterationRecord&, const SolverState&)> hook;
};

struct Trace {
  std::vector<IterationRecord> records;
  std::vector<Vector> iterates;  // filled when keep_iterates is set
  Vector x_final;
  double fval_final = 0.0;  // F at the terminal iterate
  bool converged = false;
};

// Runs `method` from x_{-1} = x_0 = origin (unless overridden) until the
// termination rule fires or max_iter steps have been taken.  Deterministic
// given identical inputs.  Throws NonFiniteIterate if an iterate leaves the
// representable range.
Trace run_solver(const Problem& problem, Method method, const KernelSpec& kernel,
                 const StepPlan& plan, const RunOptions& options = {});

/// One IterationRecord per line, field names as in the struct.
void write_trace_jsonl(const Trace& trace, std::ostream& out);

}  // namespace bifrb
