#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bifrb/problems.hpp"
#include "bifrb/solver.hpp"
#include "bifrb/types.hpp"

namespace bifrb {

struct BenchConfig {
  std::vector<std::pair<int, int>> sizes;  // (m, n)
  double radius_R = 1.0;
  int trials = 50;
  std::vector<Method> solvers{Method::BiFRB, Method::iFRB, Method::FRB, Method::DR,
                              Method::iTseng};
  std::uint64_t master_seed = 42;
  double tol = 1e-10;
  int max_iter = 10001;
  BMode b_mode = BMode::Gaussian;
  int jobs = 0;        // 0: one per hardware thread
  int sparsity_r = 0;  // 0: ceil(m / 5)
  enum class Format { Csv, Json, Md };
  Format format = Format::Csv;
  std::string out_path;  // empty: stdout
};

struct BenchmarkRow {
  int m = 0;
  int n = 0;
  double radius_R = 1.0;
  std::string solver;
  int iter_mean_ceil = 0;  // ceiling of the mean per-trial iteration count
  double fval_min = 0.0;   // min over trials of F at the terminal iterate
  int trials_used = 0;     // trials that completed; failures are excluded
};

// Per-trial seed, a pure function of (master_seed, size index, trial index).
// Solver order never affects instances.
std::uint64_t trial_seed(std::uint64_t master_seed, int size_index, int trial_index);

/// (ceil(mean(iters)), min(fvals)); throws EmptyInput on empty lists.
std::pair<int, double> aggregate(std::span<const int> iters, std::span<const double> fvals);

// Runs the benchmark protocol: per (size, solver) cell, `trials` seeded
// instances, one row each.  Trials run in parallel (config.jobs threads);
// results are identical to a serial run.  Solver settings: the Bregman method
// uses the (0.1, 2.51) kernel with inertia 0.9; the Euclidean inertial
// variants use inertia 0.49; the reflected baseline runs without inertia.
std::vector<BenchmarkRow> run_benchmark(const BenchConfig& config);

struct RateFit {
  double q = 1.0;  // contraction factor exp(slope)
  double r_squared = 0.0;
};

// Least-squares fit of log |x_k - reference| against k over the trace tail
// (fraction tail_fraction, entries below 1e-14 excluded).  The reference
// defaults to the final iterate.  Requires a trace recorded with
// keep_iterates and at least 20 entries; throws InsufficientData otherwise.
RateFit rate_fit(const Trace& trace, const std::optional<Vector>& reference = {},
                 double tail_fraction = 0.5);

std::string render_csv(std::span<const BenchmarkRow> rows);
std::string render_json(std::span<const BenchmarkRow> rows);
std::string render_markdown(std::span<const BenchmarkRow> rows);
std::string render_rows(std::span<const BenchmarkRow> rows, BenchConfig::Format format);

}  // namespace bifrb
