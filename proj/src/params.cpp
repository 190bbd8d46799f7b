#include "bifrb/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "bifrb/errors.hpp"

namespace bifrb {

AbcConstants abc_constants(double sigma, double l_grad_h, double l_grad_g) {
  if (!(sigma > 0.0)) throw InvalidBounds("abc_constants requires sigma > 0");
  if (l_grad_h < sigma) throw InvalidBounds("abc_constants requires l_grad_h >= sigma");
  if (l_grad_g < 0.0) throw InvalidBounds("abc_constants requires l_grad_g >= 0");
  return {(l_grad_h - sigma) * l_grad_g * l_grad_g, sigma, l_grad_g};
}

MeritParams MeritParams::initial(double p_initial) {
  MeritParams m;
  m.p_prev = p_initial;
  m.p_cur = p_initial;
  m.m1_cur = std::numeric_limits<double>::quiet_NaN();
  m.p_bar = p_initial;
  return m;
}

MeritParams next_merit_params(const MeritParams& prev, double lambda_prev, double lambda_cur,
                              double alpha_cur, const AbcConstants& abc) {
  if (!(lambda_prev > 0.0) || !(lambda_cur > 0.0)) {
    throw InvalidBounds("next_merit_params requires positive stepsizes");
  }
  if (!(alpha_cur >= 0.0 && alpha_cur < 1.0)) {
    throw InvalidBounds("next_merit_params requires alpha in [0, 1)");
  }
  const double ratio = lambda_prev * lambda_prev / lambda_cur;
  MeritParams next;
  next.p_prev = prev.p_cur;
  next.p_cur = 0.5 * abc.a * ratio + 0.5 * (abc.b / lambda_cur - abc.c) - prev.p_cur;
  next.m1_cur = prev.p_cur - (alpha_cur + abc.b * abc.c * lambda_prev) / (2.0 * lambda_cur) -
                abc.a * ratio / 2.0;
  next.p_bar = std::max(prev.p_bar, next.p_cur);
  return next;
}

double closed_form_p(int k, std::span<const double> lambdas, double p_initial,
                     const AbcConstants& abc) {
  if (k < -1) throw InvalidBounds("closed_form_p requires k >= -1");
  if (static_cast<int>(lambdas.size()) < k + 2) {
    throw InvalidBounds("closed_form_p: lambdas must cover indices -1..k");
  }
  if (k == -1) return p_initial;
  // lam(j) = lam_j for j in -1..k.
  const auto lam = [&lambdas](int j) { return lambdas[static_cast<std::size_t>(j + 1)]; };
  const double base = 0.5 * (abc.a * lam(-1) * lam(-1) + abc.b) / lam(0) - 0.5 * abc.c;
  if (k == 0) return base - p_initial;
  double a_sum = 0.0;
  double b_sum = 0.0;
  if (k % 2 == 0) {
    // p_{2K} = (a/2) sum_{i=1..K} (lam_{2i-1}^2/lam_{2i} - lam_{2i-2}^2/lam_{2i-1})
    //        + (b/2) sum_{i=1..K} (1/lam_{2i} - 1/lam_{2i-1}) + p_0-base - p_{-1}
    for (int i = 1; 2 * i <= k; ++i) {
      const double l1 = lam(2 * i - 1);
      const double l2 = lam(2 * i - 2);
      a_sum += l1 * l1 / lam(2 * i) - l2 * l2 / l1;
      b_sum += 1.0 / lam(2 * i) - 1.0 / l1;
    }
    return 0.5 * abc.a * a_sum + 0.5 * abc.b * b_sum + base - p_initial;
  }
  // p_{2K+1} = (a/2) [sum_{i=0..K} lam_{2i}^2/lam_{2i+1}
  //                   - lam_{-1}^2/lam_0 - sum_{i=1..K} lam_{2i-1}^2/lam_{2i}]
  //          + (b/2) [sum_{i=0..K} 1/lam_{2i+1} - 1/lam_0 - sum_{i=1..K} 1/lam_{2i}]
  //          + p_{-1}
  a_sum = -lam(-1) * lam(-1) / lam(0);
  b_sum = -1.0 / lam(0);
  for (int i = 0; 2 * i + 1 <= k; ++i) {
    const double le = lam(2 * i);
    a_sum += le * le / lam(2 * i + 1);
    b_sum += 1.0 / lam(2 * i + 1);
    if (i >= 1) {
      const double lo = lam(2 * i - 1);
      a_sum -= lo * lo / le;
      b_sum -= 1.0 / le;
    }
  }
  return 0.5 * abc.a * a_sum + 0.5 * abc.b * b_sum + p_initial;
}

void to_json(nlohmann::json& j, const FixedCert& cert) {
  j = nlohmann::json{{"sigma", cert.sigma},
                     {"l_grad_h", cert.l_grad_h},
                     {"l_grad_g", cert.l_grad_g},
                     {"lambda", cert.lambda},
                     {"p_initial", cert.p_initial},
                     {"p_interval", {cert.p_interval.first, cert.p_interval.second}},
                     {"mode", cert.mode}};
}

FixedCert cert_from_json(const nlohmann::json& j) {
  FixedCert cert;
  cert.sigma = j.at("sigma").get<double>();
  cert.l_grad_h = j.at("l_grad_h").get<double>();
  cert.l_grad_g = j.at("l_grad_g").get<double>();
  cert.lambda = j.at("lambda").get<double>();
  cert.p_initial = j.at("p_initial").get<double>();
  cert.p_interval = {j.at("p_interval")[0].get<double>(), j.at("p_interval")[1].get<double>()};
  cert.mode = j.at("mode").get<std::string>();
  return cert;
}

double bifrb_lambda_star(const AbcConstants& abc) {
  const double tbc = 2.0 * abc.b * abc.c + abc.c;
  const double disc = tbc * tbc + 4.0 * abc.a * (abc.b - 2.0);
  if (!(abc.a > 0.0) || !(disc > 0.0)) {
    throw HypothesisViolated("lambda_star undefined: need a > 0 and positive discriminant");
  }
  return (std::sqrt(disc) - tbc) / (2.0 * abc.a);
}

std::pair<double, double> bifrb_p_interval(const AbcConstants& abc, double lambda) {
  if (!(lambda > 0.0)) throw InvalidBounds("bifrb_p_interval requires lambda > 0");
  const double lo = std::max(0.0, 0.5 / lambda + 0.5 * abc.b * abc.c + 0.5 * abc.a * lambda);
  const double hi = std::min(0.5 * abc.a * lambda + 0.5 * (abc.b / lambda - abc.c),
                             0.5 * (abc.b - 1.0) / lambda - 0.5 * (abc.b + 1.0) * abc.c);
  return {lo, hi};
}

FixedCert bifrb_fixed_cert(double sigma, double l_grad_h, double l_grad_g, double safety) {
  if (!(sigma > 2.0)) throw HypothesisViolated("fixed-stepsize certificate requires sigma > 2");
  if (!((l_grad_h - sigma) * sigma > 0.25)) {
    throw HypothesisViolated("fixed-stepsize certificate requires (l_grad_h - sigma) * sigma > 1/4");
  }
  if (!(safety > 0.0 && safety < 1.0)) throw InvalidBounds("safety must lie in (0, 1)");
  const AbcConstants abc = abc_constants(sigma, l_grad_h, l_grad_g);
  const double cap = l_grad_g > 0.0 ? (sigma - 1.0) / ((sigma + 1.0) * l_grad_g)
                                    : std::numeric_limits<double>::infinity();
  const double lambda = safety * std::min(bifrb_lambda_star(abc), cap);
  FixedCert cert;
  cert.sigma = sigma;
  cert.l_grad_h = l_grad_h;
  cert.l_grad_g = l_grad_g;
  cert.lambda = lambda;
  cert.p_interval = bifrb_p_interval(abc, lambda);
  cert.p_initial = 0.5 * (cert.p_interval.first + cert.p_interval.second);
  cert.mode = "fixed";
  return cert;
}

std::pair<double, double> ifrb_p_interval(double l_grad_g, double alpha_bar, double lambda0,
                                          double epsilon) {
  if (!(lambda0 > 0.0) || !(epsilon > 0.0)) {
    throw InvalidBounds("ifrb_p_interval requires positive stepsizes");
  }
  const double shift = 0.5 * alpha_bar / epsilon;
  return {0.5 * l_grad_g + shift, 0.5 / lambda0 - l_grad_g - shift};
}

FixedCert ifrb_fixed_cert(double l_grad_g, double alpha_bar, double safety) {
  if (!(alpha_bar >= 0.0 && alpha_bar < 0.5)) {
    throw InvalidAlpha("Euclidean fixed-stepsize certificate requires alpha_bar in [0, 1/2)");
  }
  if (!(l_grad_g > 0.0)) throw InvalidBounds("ifrb_fixed_cert requires l_grad_g > 0");
  if (!(safety > 0.0 && safety < 1.0)) throw InvalidBounds("safety must lie in (0, 1)");
  const double lambda = safety * (1.0 - 2.0 * alpha_bar) / (3.0 * l_grad_g);
  FixedCert cert;
  cert.sigma = 1.0;
  cert.l_grad_h = 1.0;
  cert.l_grad_g = l_grad_g;
  cert.lambda = lambda;
  cert.p_interval = ifrb_p_interval(l_grad_g, alpha_bar, lambda, lambda);
  cert.p_initial = 0.5 * (cert.p_interval.first + cert.p_interval.second);
  cert.mode = "euclidean-fixed";
  return cert;
}

ScheduleReport dynamic_schedule_check(std::span<const double> lambdas, double alpha_bar,
                                      double l_grad_g, std::span<const double> a_k,
                                      double epsilon) {
  ScheduleReport report;
  std::ostringstream msg;
  if (lambdas.size() < 2) {
    report.message = "schedule must cover at least lambda_{-1} and lambda_0";
    return report;
  }
  const double eps_limit = (1.0 - 2.0 * alpha_bar) / (3.0 * l_grad_g);
  if (!(epsilon > 0.0 && epsilon < eps_limit)) {
    msg << "epsilon " << epsilon << " outside (0, " << eps_limit << "); ";
  }
  report.lambda_lo = *std::min_element(lambdas.begin(), lambdas.end());
  report.lambda_hi = *std::max_element(lambdas.begin(), lambdas.end());
  report.lambda_hi_limit = epsilon / (2.0 * alpha_bar + 3.0 * epsilon * l_grad_g);
  report.bounds_ok = msg.str().empty() && report.lambda_lo >= epsilon &&
                     report.lambda_hi < report.lambda_hi_limit;
  if (!report.bounds_ok && msg.str().empty()) {
    msg << "stepsize range [" << report.lambda_lo << ", " << report.lambda_hi
        << "] violates floor " << epsilon << " or ceiling " << report.lambda_hi_limit << "; ";
  }
  report.increments_ok = true;
  for (std::size_t k = 0; k + 1 < lambdas.size(); ++k) {
    const double inc = 1.0 / lambdas[k + 1] - 1.0 / lambdas[k];
    const double bound = k < a_k.size() ? a_k[k] : 0.0;
    if (inc < 0.0 || inc > bound + 1e-15) {
      report.increments_ok = false;
      msg << "reciprocal increment at k=" << k << " is " << inc << ", outside [0, " << bound
          << "]; ";
      break;
    }
  }
  report.valid = report.bounds_ok && report.increments_ok;
  if (report.valid) {
    const auto interval = ifrb_p_interval(l_grad_g, alpha_bar, lambdas[1], epsilon);
    report.p_initial = 0.5 * (interval.first + interval.second);
  }
  report.message = msg.str().empty() ? "ok" : msg.str();
  return report;
}

namespace {

double nesterov_next(double t) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t)); }

}  // namespace

double nesterov_alpha(int k) {
  if (k < -1) throw InvalidBounds("nesterov_alpha requires k >= -1");
  double t_k = 1.0;  // t_{-1}
  for (int j = -1; j < k; ++j) t_k = nesterov_next(t_k);
  return (t_k - 1.0) / nesterov_next(t_k);
}

double NesterovSchedule::alpha(int k) {
  if (k < -1) throw InvalidBounds("NesterovSchedule::alpha requires k >= -1");
  const int need = k + 3;  // memo up to t_{k+1}
  while (static_cast<int>(t_.size()) < need) t_.push_back(nesterov_next(t_.back()));
  return (t_[static_cast<std::size_t>(k + 1)] - 1.0) / t_[static_cast<std::size_t>(k + 2)];
}

Assumption3Report assumption3_report(std::span<const double> p_trace,
                                     std::span<const double> m1_trace, int tail) {
  if (p_trace.empty() || m1_trace.empty()) {
    throw EmptyInput("assumption3_report requires nonempty traces");
  }
  const auto window = [tail](std::span<const double> trace) {
    std::size_t len = tail > 0 ? static_cast<std::size_t>(tail) : trace.size() / 4;
    len = std::clamp<std::size_t>(len, 1, trace.size());
    return trace.subspan(trace.size() - len);
  };
  const auto p_tail = window(p_trace);
  const auto m1_tail = window(m1_trace);
  Assumption3Report report;
  report.p_tail_min = *std::min_element(p_tail.begin(), p_tail.end());
  report.m1_tail_min = *std::min_element(m1_tail.begin(), m1_tail.end());
  report.p_max = *std::max_element(p_trace.begin(), p_trace.end());
  report.valid = report.p_tail_min >= 0.0 && report.m1_tail_min > 0.0;
  return report;
}

double StepPlan::lambda(int k) const {
  if (lambda_schedule) return lambda_schedule(k);
  return lambda_hi;
}

std::function<double(int)> StepPlan::make_alpha_fn() const {
  if (alpha_rule == AlphaRule::Nesterov) {
    auto schedule = std::make_shared<NesterovSchedule>();
    return [schedule](int k) { return schedule->alpha(k); };
  }
  const double value = alpha_value;
  return [value](int) { return value; };
}

StepPlan StepPlan::from_cert(const FixedCert& cert, AlphaRule rule, double alpha_value) {
  StepPlan plan;
  plan.mode = cert.mode == "euclidean-fixed" ? Mode::EuclideanFixed : Mode::Fixed;
  plan.alpha_rule = rule;
  plan.alpha_value = alpha_value;
  plan.p_initial = cert.p_initial;
  plan.lambda_lo = cert.lambda;
  plan.lambda_hi = cert.lambda;
  return plan;
}

}  // namespace bifrb
