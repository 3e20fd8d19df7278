#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "uot/bench.hpp"
#include "uot/gen.hpp"
#include "uot/io.hpp"
#include "uot/solvers.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitUnsupported = 3;
constexpr int kExitNoConvergence = 4;

int cmd_gen_gauss(uot::Index bins, uot::Index pairs, std::uint64_t seed,
                  const std::string& out_dir) {
  fs::create_directories(out_dir);
  for (uot::Index k = 0; k < pairs; ++k) {
    const uot::ProblemSpec spec = uot::gen_gaussian_pair(bins, seed + static_cast<std::uint64_t>(k));
    uot::save_problem(spec, (fs::path(out_dir) / ("pair_" + std::to_string(k) + ".json")).string());
  }
  std::cout << "wrote " << pairs << " problem files to " << out_dir << "\n";
  return 0;
}

int cmd_solve(const std::string& problem, std::optional<std::string> penalty,
              std::optional<double> lambda, std::optional<double> epsilon,
              const std::string& solver, const std::string& screen, double gap_tol,
              int period, uot::Index max_iters, std::optional<double> stepsize,
              const std::string& trace_path) {
  uot::ProblemSpec spec = uot::load_problem(problem);
  if (penalty) spec.penalty = uot::penalty_from_string(*penalty);
  if (lambda) spec.lambda = *lambda;
  if (epsilon) spec.epsilon = *epsilon;
  spec.validate();

  uot::SolverConfig cfg;
  cfg.kind = uot::solver_from_string(solver);
  cfg.method = uot::screen_method_from_string(screen);
  cfg.gap_tol = gap_tol;
  cfg.screen_period = period;
  cfg.max_iters = max_iters;
  cfg.stepsize = stepsize;

  const uot::RunResult run = uot::run_with_screening(spec, cfg);
  if (!trace_path.empty()) uot::save_trace_csv(run.trace, trace_path);

  const uot::IterateTrace& last = run.trace.back();
  std::cout << "iters=" << run.iters << " primal=" << last.primal << " dual=" << last.dual
            << " gap=" << run.final_gap << " screened=" << run.screened << "/" << spec.nm()
            << (run.converged ? "" : "  [not converged]") << "\n";
  if (!run.converged) return kExitNoConvergence;
  return 0;
}

int cmd_bench(const std::string& plan_path, const std::string& out_dir) {
  const uot::ExperimentPlan plan = uot::ExperimentPlan::load(plan_path);
  const uot::ExperimentResult result = uot::run_experiment(plan, out_dir);
  std::cout << "wrote " << (fs::path(out_dir) / "results.json").string() << "\n";
  for (const uot::BenchCell& cell : result.cells) {
    if (cell.method == uot::ScreenMethod::None) continue;
    std::cout << to_string(cell.solver) << " lambda=" << cell.lambda
              << " tol=" << cell.gap_tol << " " << to_string(cell.method) << ": ";
    if (cell.unsupported)
      std::cout << "unsupported\n";
    else
      std::cout << "median speed-up " << cell.median_speedup << "\n";
  }
  return 0;
}

int cmd_mnist(const std::string& images, const std::string& labels, uot::Index a,
              uot::Index b, const std::string& out) {
  const uot::ProblemSpec spec = uot::load_mnist_idx(images, labels, a, b);
  uot::save_problem(spec, out);
  std::cout << "wrote " << out << " (n=" << spec.n << ", m=" << spec.m << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unbalanced optimal transport solver with dynamic safe screening"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-gauss", "generate Gaussian histogram transport problems");
  uot::Index bins = 100, pairs = 1;
  std::uint64_t seed = 1;
  std::string out_dir = "problems";
  gen->add_option("--bins", bins, "histogram bins")->check(CLI::PositiveNumber);
  gen->add_option("--pairs", pairs, "number of problem files")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "rng seed");
  gen->add_option("--out", out_dir, "output directory");

  auto* solve = app.add_subcommand("solve", "solve one problem file");
  std::string problem, solver = "fista", screen = "none", trace_path;
  std::optional<std::string> penalty;
  std::optional<double> lambda, epsilon, stepsize;
  double gap_tol = 1e-7;
  int period = 10;
  uot::Index max_iters = 500000;
  solve->add_option("--problem", problem, "problem JSON file")->required();
  solve->add_option("--penalty", penalty, "override penalty: l2|kl");
  solve->add_option("--lambda", lambda, "override regularization weight");
  solve->add_option("--epsilon", epsilon, "override KL shift");
  solve->add_option("--solver", solver, "fista|mm|cd");
  solve->add_option("--screen", screen,
                    "none|gap|sa|ell|dome|gap-ctp|sa-ctp|ell-ctp|sa-ran");
  solve->add_option("--gap-tol", gap_tol, "duality gap stopping tolerance");
  solve->add_option("--period", period, "screening period w")->check(CLI::PositiveNumber);
  solve->add_option("--max-iters", max_iters, "iteration cap");
  solve->add_option("--stepsize", stepsize, "stepsize override");
  solve->add_option("--trace", trace_path, "trace CSV output path");

  auto* bench = app.add_subcommand("bench", "run an experiment plan");
  std::string plan_path, bench_out = "bench_out";
  bench->add_option("--plan", plan_path, "plan JSON file")->required();
  bench->add_option("--out", bench_out, "output directory");

  auto* mnist = app.add_subcommand("mnist", "build a problem from two IDX images");
  std::string images, labels, mnist_out = "mnist_problem.json";
  uot::Index ia = 0, ib = 1;
  mnist->add_option("--images", images, "IDX image file")->required();
  mnist->add_option("--labels", labels, "IDX label file")->required();
  mnist->add_option("--a", ia, "first image index");
  mnist->add_option("--b", ib, "second image index");
  mnist->add_option("--out", mnist_out, "output problem file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParse;
  }

  try {
    if (gen->parsed()) return cmd_gen_gauss(bins, pairs, seed, out_dir);
    if (solve->parsed())
      return cmd_solve(problem, penalty, lambda, epsilon, solver, screen, gap_tol, period,
                       max_iters, stepsize, trace_path);
    if (bench->parsed()) return cmd_bench(plan_path, bench_out);
    if (mnist->parsed()) return cmd_mnist(images, labels, ia, ib, mnist_out);
  } catch (const uot::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const uot::UnsupportedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const uot::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const uot::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
