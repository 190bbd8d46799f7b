#include "bifrb/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bifrb/errors.hpp"
#include "bifrb/params.hpp"

namespace bifrb {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

struct SolverSetup {
  KernelSpec kernel;
  StepPlan plan;
};

// Section-style parameter choices: the Bregman method runs the (0.1, 2.51)
// kernel with inertia 0.9, the Euclidean inertial variants inertia 0.49.
SolverSetup make_setup(Method method) {
  SolverSetup setup;
  switch (method) {
    case Method::BiFRB: {
      setup.kernel = KernelSpec(0.1, 2.51);
      const FixedCert cert = bifrb_fixed_cert(2.51, 2.61, 1.0);
      setup.plan = StepPlan::from_cert(cert, StepPlan::AlphaRule::Constant, 0.9);
      break;
    }
    case Method::iFRB: {
      setup.kernel = KernelSpec::euclidean();
      const FixedCert cert = ifrb_fixed_cert(1.0, 0.49);
      setup.plan = StepPlan::from_cert(cert, StepPlan::AlphaRule::Constant, 0.49);
      break;
    }
    case Method::FRB: {
      setup.kernel = KernelSpec::euclidean();
      const FixedCert cert = ifrb_fixed_cert(1.0, 0.0);
      setup.plan = StepPlan::from_cert(cert, StepPlan::AlphaRule::Constant, 0.0);
      break;
    }
    case Method::DR:
    case Method::iTseng:
      setup.kernel = KernelSpec::euclidean();
      setup.plan.lambda_lo = setup.plan.lambda_hi = 1.0;
      break;
  }
  return setup;
}

std::string format_fval(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master_seed, int size_index, int trial_index) {
  const std::uint64_t a = splitmix64(master_seed ^ (0x9E3779B97F4A7C15ull *
                                                    static_cast<std::uint64_t>(size_index + 1)));
  return splitmix64(a ^ (0xC2B2AE3D27D4EB4Full * static_cast<std::uint64_t>(trial_index + 1)));
}

std::pair<int, double> aggregate(std::span<const int> iters, std::span<const double> fvals) {
  if (iters.empty() || fvals.empty() || iters.size() != fvals.size()) {
    throw EmptyInput("aggregate requires nonempty lists of equal length");
  }
  const double mean = std::accumulate(iters.begin(), iters.end(), 0.0) /
                      static_cast<double>(iters.size());
  const double fmin = *std::min_element(fvals.begin(), fvals.end());
  return {static_cast<int>(std::ceil(mean)), fmin};
}

std::vector<BenchmarkRow> run_benchmark(const BenchConfig& config) {
  if (config.sizes.empty()) throw InvalidBounds("benchmark needs at least one size");
  if (config.trials < 1) throw InvalidBounds("benchmark needs trials >= 1");

  struct TrialResult {
    bool ok = false;
    int iters = 0;
    double fval = 0.0;
  };
  const std::size_t n_sizes = config.sizes.size();
  const std::size_t n_solvers = config.solvers.size();
  const std::size_t n_trials = static_cast<std::size_t>(config.trials);
  // results[size][solver][trial]
  std::vector<TrialResult> results(n_sizes * n_solvers * n_trials);
  const auto slot = [&](std::size_t si, std::size_t vi, std::size_t ti) {
    return (si * n_solvers + vi) * n_trials + ti;
  };

  std::vector<SolverSetup> setups;
  setups.reserve(n_solvers);
  for (Method method : config.solvers) setups.push_back(make_setup(method));

  RunOptions options;
  options.termination.tol = config.tol;
  options.termination.max_iter = config.max_iter;

  const std::size_t n_cells = n_sizes * n_trials;
  std::atomic<std::size_t> cursor{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t cell = cursor.fetch_add(1);
      if (cell >= n_cells) return;
      const std::size_t si = cell / n_trials;
      const std::size_t ti = cell % n_trials;
      const auto [m, n] = config.sizes[si];
      const int r = config.sparsity_r > 0 ? config.sparsity_r : default_sparsity(m);
      std::shared_ptr<const FeasibilityInstance> instance;
      try {
        instance = std::make_shared<FeasibilityInstance>(
            generate_instance(m, n, r, config.radius_R,
                              trial_seed(config.master_seed, static_cast<int>(si),
                                         static_cast<int>(ti)),
                              config.b_mode));
      } catch (const Error&) {
        continue;  // all solver cells for this trial stay failed
      }
      const Problem problem = make_problem(instance);
      for (std::size_t vi = 0; vi < n_solvers; ++vi) {
        try {
          const Trace trace = run_solver(problem, config.solvers[vi], setups[vi].kernel,
                                         setups[vi].plan, options);
          results[slot(si, vi, ti)] = {true, static_cast<int>(trace.records.size()),
                                       trace.fval_final};
        } catch (const Error&) {
          // recorded as a failed trial; trials_used shrinks accordingly
        }
      }
    }
  };

  unsigned jobs = config.jobs > 0 ? static_cast<unsigned>(config.jobs)
                                  : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<std::size_t>(jobs, n_cells);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::vector<BenchmarkRow> rows;
  rows.reserve(n_sizes * n_solvers);
  for (std::size_t si = 0; si < n_sizes; ++si) {
    for (std::size_t vi = 0; vi < n_solvers; ++vi) {
      BenchmarkRow row;
      row.m = config.sizes[si].first;
      row.n = config.sizes[si].second;
      row.radius_R = config.radius_R;
      row.solver = method_name(config.solvers[vi]);
      std::vector<int> iters;
      std::vector<double> fvals;
      for (std::size_t ti = 0; ti < n_trials; ++ti) {
        const TrialResult& res = results[slot(si, vi, ti)];
        if (!res.ok) continue;
        iters.push_back(res.iters);
        fvals.push_back(res.fval);
      }
      row.trials_used = static_cast<int>(iters.size());
      if (!iters.empty()) {
        std::tie(row.iter_mean_ceil, row.fval_min) = aggregate(iters, fvals);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

RateFit rate_fit(const Trace& trace, const std::optional<Vector>& reference,
                 double tail_fraction) {
  if (trace.iterates.size() < 20) {
    throw InsufficientData("rate_fit needs a trace of length >= 20 recorded with keep_iterates");
  }
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw InvalidBounds("tail_fraction must lie in (0, 1]");
  }
  const Vector& ref = reference ? *reference : trace.iterates.back();
  const std::size_t count = trace.iterates.size();
  const std::size_t start =
      count - std::max<std::size_t>(2, static_cast<std::size_t>(tail_fraction * count));
  std::vector<double> ks;
  std::vector<double> logs;
  for (std::size_t k = start; k < count; ++k) {
    const double e = (trace.iterates[k] - ref).norm();
    if (e < 1e-14) continue;
    ks.push_back(static_cast<double>(k));
    logs.push_back(std::log(e));
  }
  if (ks.size() < 3) throw InsufficientData("rate_fit: fewer than 3 usable tail entries");
  const double n = static_cast<double>(ks.size());
  const double k_mean = std::accumulate(ks.begin(), ks.end(), 0.0) / n;
  const double l_mean = std::accumulate(logs.begin(), logs.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double dk = ks[i] - k_mean;
    const double dl = logs[i] - l_mean;
    sxx += dk * dk;
    sxy += dk * dl;
    syy += dl * dl;
  }
  const double slope = sxy / sxx;
  RateFit fit;
  fit.q = std::exp(slope);
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

std::string render_csv(std::span<const BenchmarkRow> rows) {
  std::ostringstream out;
  out << "m,n,R,solver,iter_mean_ceil,fval_min,trials_used\n";
  for (const BenchmarkRow& row : rows) {
    out << row.m << ',' << row.n << ',' << format_fval(row.radius_R) << ',' << row.solver << ','
        << row.iter_mean_ceil << ',' << format_fval(row.fval_min) << ',' << row.trials_used
        << '\n';
  }
  return out.str();
}

std::string render_json(std::span<const BenchmarkRow> rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const BenchmarkRow& row : rows) {
    arr.push_back({{"m", row.m},
                   {"n", row.n},
                   {"R", row.radius_R},
                   {"solver", row.solver},
                   {"iter_mean_ceil", row.iter_mean_ceil},
                   {"fval_min", row.fval_min},
                   {"trials_used", row.trials_used}});
  }
  return arr.dump(2) + "\n";
}

std::string render_markdown(std::span<const BenchmarkRow> rows) {
  std::ostringstream out;
  out << "| m | n | R | solver | iter_mean_ceil | fval_min | trials_used |\n";
  out << "|---|---|---|--------|----------------|----------|-------------|\n";
  for (const BenchmarkRow& row : rows) {
    out << "| " << row.m << " | " << row.n << " | " << format_fval(row.radius_R) << " | "
        << row.solver << " | " << row.iter_mean_ceil << " | " << format_fval(row.fval_min)
        << " | " << row.trials_used << " |\n";
  }
  return out.str();
}

std::string render_rows(std::span<const BenchmarkRow> rows, BenchConfig::Format format) {
  switch (format) {
    case BenchConfig::Format::Json: return render_json(rows);
    case BenchConfig::Format::Md: return render_markdown(rows);
    case BenchConfig::Format::Csv: break;
  }
  return render_csv(rows);
}

}  // namespace bifrb
