#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace bifrb {

// Constants a = (L_h - sigma) * L_g^2, b = sigma, c = L_g that drive the
// merit-parameter recursions.
struct AbcConstants {
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;
};

AbcConstants abc_constants(double sigma, double l_grad_h, double l_grad_g);

// Running merit-parameter pair.  Before step k the window holds p_{k-1};
// advancing it produces p_k and M_{1,k}:
//   p_k     = (a/2) lam_{k-1}^2 / lam_k + (b / lam_k - c) / 2 - p_{k-1}
//   M_{1,k} = p_{k-1} - (alpha_k + b c lam_{k-1}) / (2 lam_k)
//                     - a lam_{k-1}^2 / (2 lam_k)
struct MeritParams {
  double p_prev = 0.0;
  double p_cur = 0.0;
  double m1_cur = 0.0;
  double p_bar = 0.0;  // running max of p_k, the certificate upper bound

  static MeritParams initial(double p_initial);
};

MeritParams next_merit_params(const MeritParams& prev, double lambda_prev, double lambda_cur,
                              double alpha_cur, const AbcConstants& abc);

// Parity closed form for p_k.  lambdas[j] holds lam_{j-1}, so the span must
// cover indices -1..k (size >= k + 2).  Equals iterating next_merit_params
// from p_initial.
double closed_form_p(int k, std::span<const double> lambdas, double p_initial,
                     const AbcConstants& abc);

struct FixedCert {
  double sigma = 0.0;
  double l_grad_h = 0.0;
  double l_grad_g = 0.0;
  double lambda = 0.0;
  double p_initial = 0.0;
  std::pair<double, double> p_interval{0.0, 0.0};
  std::string mode;  // "fixed" | "euclidean-fixed"
};

void to_json(nlohmann::json& j, const FixedCert& cert);
FixedCert cert_from_json(const nlohmann::json& j);

// lambda* = (sqrt((2bc + c)^2 + 4a(b - 2)) - 2bc - c) / (2a); positive under
// the fixed-stepsize hypotheses.
double bifrb_lambda_star(const AbcConstants& abc);

// Admissible p_{-1} interval at a given fixed stepsize:
//   ( max(0, 1/(2 lam) + bc/2 + a lam/2),
//     min(a lam/2 + (b/lam - c)/2, (b-1)/(2 lam) - (b+1) c/2) ).
std::pair<double, double> bifrb_p_interval(const AbcConstants& abc, double lambda);

// Fixed-stepsize certificate for the Bregman method.  Requires sigma > 2 and
// (L_h - sigma) sigma > 1/4; throws HypothesisViolated otherwise.  Picks
// lambda = safety * min(lambda*, (sigma - 1) / ((sigma + 1) L_g)) and p_{-1}
// at the interval midpoint, which makes p_k constant in k.
FixedCert bifrb_fixed_cert(double sigma, double l_grad_h, double l_grad_g, double safety = 0.95);

// Euclidean-kernel counterpart: lambda = safety * (1 - 2 alpha_bar) / (3 L_g),
// p_{-1} at the midpoint of ifrb_p_interval.  Throws InvalidAlpha if
// alpha_bar >= 1/2.
FixedCert ifrb_fixed_cert(double l_grad_g, double alpha_bar, double safety = 0.95);

// Admissible p_{-1} interval for the Euclidean dynamic rule with stepsize
// floor epsilon and first stepsize lambda0:
//   ( L_g/2 + alpha_bar/(2 eps), 1/(2 lambda0) - L_g - alpha_bar/(2 eps) ).
std::pair<double, double> ifrb_p_interval(double l_grad_g, double alpha_bar, double lambda0,
                                          double epsilon);

struct ScheduleReport {
  bool bounds_ok = false;      // floor = epsilon and ceiling below its limit
  bool increments_ok = false;  // 0 <= 1/lam_k - 1/lam_{k-1} <= a_k
  bool valid = false;
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  double lambda_hi_limit = 0.0;  // epsilon / (2 alpha_bar + 3 epsilon L_g)
  double p_initial = 0.0;        // meaningful only when valid
  std::string message;
};

// Validates a dynamic Euclidean stepsize schedule.  lambdas[j] holds
// lam_{j-1}; a_k[k] bounds the k-th reciprocal increment.  Report-valued:
// never throws on an inadmissible schedule.
ScheduleReport dynamic_schedule_check(std::span<const double> lambdas, double alpha_bar,
                                      double l_grad_g, std::span<const double> a_k,
                                      double epsilon);

// alpha_k = (t_k - 1) / t_{k+1} with t_{-1} = 1 and
// t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2.  Accepts k >= -1; stateless (O(k)).
double nesterov_alpha(int k);

// Memoized variant; owned by a single run (not thread-safe across owners).
class NesterovSchedule {
 public:
  double alpha(int k);

 private:
  std::vector<double> t_{1.0};  // t_[i] = t_{i-1}
};

struct Assumption3Report {
  double p_tail_min = 0.0;
  double m1_tail_min = 0.0;
  double p_max = 0.0;
  bool valid = false;
};

// Tail-window proxy for the liminf conditions: minimum of p_k and M_{1,k}
// over the last `tail` entries (tail <= 0 selects the last 25%, at least 1),
// plus the max of p_k as the p-bar certificate.
Assumption3Report assumption3_report(std::span<const double> p_trace,
                                     std::span<const double> m1_trace, int tail = 0);

// Stepsize and inertial schedules for a solver run.
struct StepPlan {
  enum class Mode { Fixed, Dynamic, EuclideanFixed };
  enum class AlphaRule { Constant, Nesterov };

  Mode mode = Mode::Fixed;
  AlphaRule alpha_rule = AlphaRule::Constant;
  double alpha_value = 0.0;  // used by the constant rule
  double p_initial = 0.0;
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  std::function<double(int)> lambda_schedule;  // optional; k >= -1

  /// lam_k; constant plans return lambda_hi, lam_{-1} defaults to lam_0.
  double lambda(int k) const;

  // Fresh alpha evaluator for one run (owns its own memo table).
  std::function<double(int)> make_alpha_fn() const;

  static StepPlan from_cert(const FixedCert& cert, AlphaRule rule = AlphaRule::Constant,
                            double alpha_value = 0.0);
};

}  // namespace bifrb
