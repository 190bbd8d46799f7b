#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bifrb/bench.hpp"

namespace {

std::vector<std::pair<int, int>> parse_sizes(const std::string& text) {
  std::vector<std::pair<int, int>> sizes;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    const auto x = token.find('x');
    if (x == std::string::npos) throw CLI::ValidationError("sizes", "expected MxN pairs");
    sizes.emplace_back(std::stoi(token.substr(0, x)), std::stoi(token.substr(x + 1)));
  }
  if (sizes.empty()) throw CLI::ValidationError("sizes", "no sizes given");
  return sizes;
}

std::vector<bifrb::Method> parse_solvers(const std::string& text) {
  std::vector<bifrb::Method> solvers;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    const auto method = bifrb::method_from_name(token);
    if (!method) throw CLI::ValidationError("solvers", "unknown solver: " + token);
    solvers.push_back(*method);
  }
  if (solvers.empty()) throw CLI::ValidationError("solvers", "no solvers given");
  return solvers;
}

bifrb::BenchConfig::Format parse_format(const std::string& text) {
  if (text == "csv") return bifrb::BenchConfig::Format::Csv;
  if (text == "json") return bifrb::BenchConfig::Format::Json;
  if (text == "md") return bifrb::BenchConfig::Format::Md;
  throw CLI::ValidationError("format", "expected csv, json or md");
}

int emit(const bifrb::BenchConfig& config, const std::vector<bifrb::BenchmarkRow>& rows,
         double wall_seconds) {
  const std::string text = bifrb::render_rows(rows, config.format);
  if (config.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(config.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot open " << config.out_path << " for writing\n";
      return 2;
    }
    out << text;
  }
  bool any_empty = false;
  for (const auto& row : rows) any_empty = any_empty || row.trials_used == 0;
  std::cerr << "b_mode=" << bifrb::b_mode_name(config.b_mode) << " seed=" << config.master_seed
            << " trials=" << config.trials << " wall_time=" << wall_seconds << "s\n";
  if (any_empty) {
    std::cerr << "error: at least one (size, solver) cell has no completed trials\n";
    return 1;
  }
  return 0;
}

int run_config(const bifrb::BenchConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = bifrb::run_benchmark(config);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return emit(config, rows, wall);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark harness for the Bregman inertial forward-reflected-backward solver "
               "family on sparse affine feasibility problems"};
  app.require_subcommand(1);

  std::string sizes_text = "100x4000";
  std::string solvers_text = "bifrb,ifrb,frb,dr,itseng";
  std::string b_mode_text = "gaussian";
  std::string format_text = "csv";
  bifrb::BenchConfig config;
  double scale = 1.0;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--R", config.radius_R, "ball radius R");
    cmd->add_option("--trials", config.trials, "instances per (size, solver) cell");
    cmd->add_option("--solvers", solvers_text, "comma-separated subset of bifrb,ifrb,frb,dr,itseng");
    cmd->add_option("--seed", config.master_seed, "master seed");
    cmd->add_option("--tol", config.tol, "termination tolerance");
    cmd->add_option("--max-iter", config.max_iter, "iteration cap");
    cmd->add_option("--b-mode", b_mode_text, "gaussian | planted")
        ->check(CLI::IsMember({"gaussian", "planted"}));
    cmd->add_option("--r", config.sparsity_r, "sparsity level (default ceil(m/5))");
    cmd->add_option("--jobs", config.jobs, "worker threads (default: hardware)");
    cmd->add_option("--format", format_text, "csv | json | md")
        ->check(CLI::IsMember({"csv", "json", "md"}));
    cmd->add_option("--out", config.out_path, "output path (default stdout)");
  };

  CLI::App* run = app.add_subcommand("run", "run a benchmark over explicit sizes");
  run->add_option("--sizes", sizes_text, "comma-separated MxN pairs, e.g. 100x4000,200x5000");
  add_common(run);

  CLI::App* table1 = app.add_subcommand(
      "table1", "run the full 9-size grid at R = 1 and R = 1000, optionally scaled");
  table1->add_option("--scale", scale, "scale factor on both dimensions, rounding up");
  add_common(table1);

  CLI11_PARSE(app, argc, argv);

  config.solvers = parse_solvers(solvers_text);
  config.b_mode = b_mode_text == "planted" ? bifrb::BMode::Planted : bifrb::BMode::Gaussian;
  config.format = parse_format(format_text);

  try {
    if (run->parsed()) {
      config.sizes = parse_sizes(sizes_text);
      return run_config(config);
    }
    // table1: the 9 (m, n) pairs of the reference grid, both radii.
    std::vector<std::pair<int, int>> grid;
    for (int m : {100, 200, 300}) {
      for (int n : {4000, 5000, 6000}) {
        grid.emplace_back(static_cast<int>(std::ceil(m * scale)),
                          static_cast<int>(std::ceil(n * scale)));
      }
    }
    config.sizes = grid;
    int rc = 0;
    for (double radius : {1.0, 1000.0}) {
      config.radius_R = radius;
      bifrb::BenchConfig sub = config;
      if (!config.out_path.empty()) {
        sub.out_path = config.out_path + (radius == 1.0 ? ".R1" : ".R1000");
      }
      rc = std::max(rc, run_config(sub));
    }
    return rc;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
