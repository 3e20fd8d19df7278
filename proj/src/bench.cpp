#include "uot/bench.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "uot/gen.hpp"
#include "uot/io.hpp"

namespace uot {

using nlohmann::json;
namespace fs = std::filesystem;

ExperimentPlan ExperimentPlan::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("plan file: ") + e.what());
  }
  ExperimentPlan plan;
  try {
    plan.dataset = j.value("dataset", plan.dataset);
    plan.bins = j.value("bins", plan.bins);
    plan.pairs = j.value("pairs", plan.pairs);
    if (j.contains("problems")) plan.problems = j["problems"].get<std::vector<std::string>>();
    if (j.contains("lambda_grid")) plan.lambda_grid = j["lambda_grid"].get<std::vector<double>>();
    plan.penalty = penalty_from_string(j.value("penalty", std::string("l2")));
    plan.epsilon = j.value("epsilon", plan.epsilon);
    plan.epsilon_rel = j.value("epsilon_rel", plan.epsilon_rel);
    if (j.contains("solvers")) {
      plan.solvers.clear();
      for (const auto& s : j["solvers"]) plan.solvers.push_back(solver_from_string(s.get<std::string>()));
    }
    if (j.contains("methods")) {
      plan.methods.clear();
      for (const auto& s : j["methods"]) plan.methods.push_back(screen_method_from_string(s.get<std::string>()));
    }
    if (j.contains("gap_tols")) plan.gap_tols = j["gap_tols"].get<std::vector<double>>();
    plan.seed = j.value("seed", plan.seed);
    plan.max_iters = j.value("max_iters", plan.max_iters);
    plan.period = j.value("period", plan.period);
  } catch (const json::exception& e) {
    throw ParseError(std::string("plan file: ") + e.what());
  }
  if (plan.lambda_grid.empty() || plan.gap_tols.empty() || plan.solvers.empty() ||
      plan.methods.empty())
    throw ParseError("plan file: empty grid");
  if (plan.dataset != "gaussian" && plan.dataset != "file")
    throw ParseError("plan file: dataset must be gaussian|file");
  if (plan.dataset == "file" && plan.problems.empty())
    throw ParseError("plan file: dataset=file needs a problems list");
  return plan;
}

ExperimentPlan ExperimentPlan::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open plan file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::string run_tag(Index inst, SolverKind s, double lambda, double tol, ScreenMethod m) {
  std::ostringstream ss;
  ss << "i" << inst << "_" << to_string(s) << "_lam" << lambda << "_tol" << tol << "_"
     << to_string(m);
  return ss.str();
}

}  // namespace

ExperimentResult run_experiment(const ExperimentPlan& plan, const std::string& out_dir) {
  std::vector<ProblemSpec> instances;
  if (plan.dataset == "gaussian") {
    for (Index k = 0; k < plan.pairs; ++k)
      instances.push_back(gen_gaussian_pair(plan.bins, plan.seed + static_cast<std::uint64_t>(k)));
  } else {
    for (const std::string& path : plan.problems) instances.push_back(load_problem(path));
  }
  for (ProblemSpec& spec : instances) {
    spec.penalty = plan.penalty;
    if (plan.penalty == Penalty::KL) {
      double ymin = std::numeric_limits<double>::infinity();
      for (double v : spec.a) ymin = std::min(ymin, v);
      for (double v : spec.b) ymin = std::min(ymin, v);
      spec.epsilon = plan.epsilon_rel > 0.0 ? plan.epsilon_rel * ymin : plan.epsilon;
      if (!(spec.epsilon >= 0.0 && spec.epsilon < ymin))
        throw DomainError("bench: KL epsilon must satisfy 0 <= eps < min marginal");
    } else {
      spec.epsilon = 0.0;
    }
  }

  if (!out_dir.empty()) fs::create_directories(fs::path(out_dir) / "traces");

  ExperimentResult result;
  json curves = json::array();
  json unsupported = json::array();

  for (SolverKind solver : plan.solvers) {
    for (double lambda : plan.lambda_grid) {
      for (double tol : plan.gap_tols) {
        // baseline first: method none defines the speed-up denominator
        std::vector<double> base_seconds(instances.size(), 0.0);
        bool base_ok = true;
        try {
          for (std::size_t inst = 0; inst < instances.size(); ++inst) {
            ProblemSpec spec = instances[inst];
            spec.lambda = lambda;
            SolverConfig cfg;
            cfg.kind = solver;
            cfg.method = ScreenMethod::None;
            cfg.gap_tol = tol;
            cfg.max_iters = plan.max_iters;
            cfg.screen_period = plan.period;
            const auto t0 = std::chrono::steady_clock::now();
            RunResult run = run_with_screening(spec, cfg);
            base_seconds[inst] =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (!out_dir.empty())
              save_trace_csv(run.trace,
                             (fs::path(out_dir) / "traces" /
                              (run_tag(static_cast<Index>(inst), solver, lambda, tol,
                                       ScreenMethod::None) +
                               ".csv"))
                                 .string());
          }
        } catch (const UnsupportedError& e) {
          base_ok = false;
          unsupported.push_back({{"solver", to_string(solver)},
                                 {"lambda", lambda},
                                 {"gap_tol", tol},
                                 {"method", "none"},
                                 {"reason", e.what()}});
        }

        for (ScreenMethod method : plan.methods) {
          BenchCell cell;
          cell.solver = solver;
          cell.lambda = lambda;
          cell.gap_tol = tol;
          cell.method = method;
          if (!base_ok || !method_supported(method, plan.penalty)) {
            cell.unsupported = true;
            unsupported.push_back({{"solver", to_string(solver)},
                                   {"lambda", lambda},
                                   {"gap_tol", tol},
                                   {"method", to_string(method)},
                                   {"reason", base_ok ? "method/penalty unsupported per feasibility table"
                                                      : "solver/penalty unsupported"}});
            result.cells.push_back(std::move(cell));
            continue;
          }
          if (method == ScreenMethod::None) {
            cell.seconds = base_seconds;
            cell.speedups.assign(instances.size(), 1.0);
            cell.median_speedup = 1.0;  // self-ratio
            result.cells.push_back(std::move(cell));
            continue;
          }
          for (std::size_t inst = 0; inst < instances.size(); ++inst) {
            ProblemSpec spec = instances[inst];
            spec.lambda = lambda;
            SolverConfig cfg;
            cfg.kind = solver;
            cfg.method = method;
            cfg.gap_tol = tol;
            cfg.max_iters = plan.max_iters;
            cfg.screen_period = plan.period;
            cfg.seed = plan.seed + 7919 * static_cast<std::uint64_t>(inst);
            const auto t0 = std::chrono::steady_clock::now();
            RunResult run = run_with_screening(spec, cfg);
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            cell.seconds.push_back(secs);
            cell.speedups.push_back(base_seconds[inst] / std::max(secs, 1e-12));
            cell.final_ratio.push_back(static_cast<double>(run.screened) /
                                       static_cast<double>(spec.nm()));
            cell.converged.push_back(run.converged);
            if (!out_dir.empty())
              save_trace_csv(run.trace,
                             (fs::path(out_dir) / "traces" /
                              (run_tag(static_cast<Index>(inst), solver, lambda, tol, method) +
                               ".csv"))
                                 .string());
            json curve = json::array();
            for (const IterateTrace& row : run.trace)
              curve.push_back({{"iter", row.iter},
                               {"gap", row.gap},
                               {"ratio", static_cast<double>(row.screened) /
                                             static_cast<double>(spec.nm())}});
            curves.push_back({{"instance", inst},
                              {"solver", to_string(solver)},
                              {"lambda", lambda},
                              {"gap_tol", tol},
                              {"method", to_string(method)},
                              {"curve", std::move(curve)}});
          }
          cell.median_speedup = median(cell.speedups);
          result.cells.push_back(std::move(cell));
        }
      }
    }
  }

  json out;
  out["penalty"] = to_string(plan.penalty);
  out["dataset"] = plan.dataset;
  out["seed"] = plan.seed;
  json table = json::array();
  for (const BenchCell& cell : result.cells) {
    table.push_back({{"solver", to_string(cell.solver)},
                     {"lambda", cell.lambda},
                     {"gap_tol", cell.gap_tol},
                     {"method", to_string(cell.method)},
                     {"unsupported", cell.unsupported},
                     {"median_speedup", cell.median_speedup},
                     {"seconds", cell.seconds},
                     {"speedups", cell.speedups},
                     {"final_screen_ratio", cell.final_ratio}});
  }
  out["speedup_table"] = std::move(table);
  out["screening_curves"] = std::move(curves);
  out["unsupported_cells"] = std::move(unsupported);
  result.summary_json = out.dump(2);
  if (!out_dir.empty()) {
    std::ofstream f(fs::path(out_dir) / "results.json");
    f << result.summary_json << '\n';
  }
  return result;
}

}  // namespace uot
