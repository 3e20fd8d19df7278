#pragma once

#include <string>
#include <vector>

#include "uot/solvers.hpp"
#include "uot/types.hpp"

namespace uot {

// Experiment plan: datasets are generated Gaussian pairs (pairs distinct
// seeds) or explicit problem files. Each (solver, lambda, gap_tol, method)
// cell runs on every instance; wall-clock speed-ups are medians against the
// method=none baseline of the same cell.
struct ExperimentPlan {
  std::string dataset = "gaussian";  // gaussian | file
  Index bins = 100;
  Index pairs = 5;
  std::vector<std::string> problems;  // dataset = file
  std::vector<double> lambda_grid{0.1};
  Penalty penalty = Penalty::L2;
  double epsilon = 0.0;      // absolute KL shift
  double epsilon_rel = 0.0;  // if > 0, epsilon = epsilon_rel * min marginal
  std::vector<SolverKind> solvers{SolverKind::Fista};
  std::vector<ScreenMethod> methods{ScreenMethod::None};
  std::vector<double> gap_tols{1e-5};
  std::uint64_t seed = 1;
  Index max_iters = 500000;
  int period = 10;

  static ExperimentPlan from_json(const std::string& text);
  static ExperimentPlan load(const std::string& path);
};

struct BenchCell {
  SolverKind solver = SolverKind::Fista;
  double lambda = 0.0;
  double gap_tol = 0.0;
  ScreenMethod method = ScreenMethod::None;
  bool unsupported = false;
  std::vector<double> seconds;       // per instance
  std::vector<double> speedups;      // per instance vs none baseline
  std::vector<double> final_ratio;   // screened fraction at exit
  std::vector<bool> converged;
  double median_speedup = 0.0;
};

struct ExperimentResult {
  std::vector<BenchCell> cells;
  std::string summary_json;
};

// Runs the plan; when out_dir is nonempty writes per-run trace CSVs under
// out_dir/traces and the aggregate results.json.
ExperimentResult run_experiment(const ExperimentPlan& plan, const std::string& out_dir);

}  // namespace uot
