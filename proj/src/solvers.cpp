#include "uot/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "uot/core.hpp"
#include "uot/penalty.hpp"
#include "uot/projection.hpp"

namespace uot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_solver_penalty(SolverKind kind, Penalty penalty) {
  if (penalty == Penalty::TV)
    throw UnsupportedError("no first-order solver for the TV penalty (evaluation only)");
  if (kind != SolverKind::MM && penalty == Penalty::KL)
    throw UnsupportedError(to_string(kind) + " requires the l2 penalty (KL gradient is not globally Lipschitz)");
}

}  // namespace

SolverKind solver_from_string(const std::string& s) {
  if (s == "fista") return SolverKind::Fista;
  if (s == "mm") return SolverKind::MM;
  if (s == "cd") return SolverKind::CD;
  throw ParseError("unknown solver '" + s + "' (expected fista|mm|cd)");
}

std::string to_string(SolverKind k) {
  switch (k) {
    case SolverKind::Fista: return "fista";
    case SolverKind::MM: return "mm";
    case SolverKind::CD: return "cd";
  }
  return "?";
}

double default_stepsize(SolverKind kind, const ProblemSpec& spec) {
  switch (kind) {
    case SolverKind::Fista: return 1.0 / static_cast<double>(spec.n + spec.m);
    case SolverKind::MM: return 0.5;
    case SolverKind::CD: return 0.0;  // exact 1-D minimization, no stepsize
  }
  return 0.0;
}

void fista_step(FistaState& it, const ProblemSpec& spec, const ScreeningState& state,
                double stepsize) {
  require_solver_penalty(SolverKind::Fista, spec.penalty);
  const std::size_t K = it.t.size();
  const double tau_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * it.tau * it.tau));
  const double beta = (it.tau - 1.0) / tau_next;

  Vec z(K);
  for (std::size_t k = 0; k < K; ++k)
    z[k] = it.t[k] + beta * (it.t[k] - it.t_prev[k]);

  Vec resid = apply_X(z, state, spec.n, spec.m);
  const Vec y = marginals(spec);
  for (std::size_t k = 0; k < resid.size(); ++k) resid[k] -= y[k];

  Vec t_next(K);
  double restart_dot = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const Index p = state.active_to_original[k];
    const Index i = p / spec.m;
    const Index j = p % spec.m;
    const double grad = spec.lambda * spec.c[static_cast<std::size_t>(p)] +
                        resid[static_cast<std::size_t>(i)] +
                        resid[static_cast<std::size_t>(spec.n + j)];
    t_next[k] = std::max(0.0, z[k] - stepsize * grad);
    restart_dot += (z[k] - t_next[k]) * (t_next[k] - it.t[k]);
  }
  it.t_prev = std::move(it.t);
  it.t = std::move(t_next);
  // gradient-mapping restart keeps the momentum from overshooting
  it.tau = restart_dot > 0.0 ? 1.0 : tau_next;
}

void mm_step(Vec& t, const ProblemSpec& spec, const ScreeningState& state,
             double stepsize) {
  require_solver_penalty(SolverKind::MM, spec.penalty);
  const Vec z = apply_X(t, state, spec.n, spec.m);
  const Vec y = marginals(spec);
  if (spec.penalty == Penalty::KL) {
    for (double v : y)
      if (v <= 0.0) throw DegenerateError("mm_step: KL requires positive marginals");
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (t[k] == 0.0) continue;
      const Index p = state.active_to_original[k];
      const Index i = p / spec.m;
      const Index j = p % spec.m;
      const double zi = z[static_cast<std::size_t>(i)] + spec.epsilon;
      const double zj = z[static_cast<std::size_t>(spec.n + j)] + spec.epsilon;
      const double g = spec.lambda * spec.c[static_cast<std::size_t>(p)] +
                       std::log(zi / y[static_cast<std::size_t>(i)]) +
                       std::log(zj / y[static_cast<std::size_t>(spec.n + j)]);
      t[k] *= std::exp(-stepsize * g);
    }
    return;
  }
  // l2: exponent 2s recovers the standard multiplicative update at s = 1/2
  const double expo = 2.0 * stepsize;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] == 0.0) continue;
    const Index p = state.active_to_original[k];
    const Index i = p / spec.m;
    const Index j = p % spec.m;
    const double num = y[static_cast<std::size_t>(i)] + y[static_cast<std::size_t>(spec.n + j)] -
                       spec.lambda * spec.c[static_cast<std::size_t>(p)];
    if (num <= 0.0) {
      t[k] = 0.0;  // gradient positive for every t >= 0, optimum pinned at zero
      continue;
    }
    const double den = z[static_cast<std::size_t>(i)] + z[static_cast<std::size_t>(spec.n + j)];
    if (den <= 0.0) continue;
    const double ratio = num / den;
    t[k] *= (expo == 1.0) ? ratio : std::pow(ratio, expo);
  }
}

void cd_step(Vec& t, const ProblemSpec& spec, const ScreeningState& state) {
  require_solver_penalty(SolverKind::CD, spec.penalty);
  Vec z = apply_X(t, state, spec.n, spec.m);
  const Vec y = marginals(spec);
  for (std::size_t k = 0; k < t.size(); ++k) {
    const Index p = state.active_to_original[k];
    const Index i = p / spec.m;
    const Index j = p % spec.m;
    const double grad = spec.lambda * spec.c[static_cast<std::size_t>(p)] +
                        (z[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)]) +
                        (z[static_cast<std::size_t>(spec.n + j)] - y[static_cast<std::size_t>(spec.n + j)]);
    const double t_new = std::max(0.0, t[k] - 0.5 * grad);
    const double delta = t_new - t[k];
    if (delta != 0.0) {
      t[k] = t_new;
      z[static_cast<std::size_t>(i)] += delta;
      z[static_cast<std::size_t>(spec.n + j)] += delta;
    }
  }
}

namespace {

// Exact block-coordinate ascent on the separable dual within the active
// constraint polytope: each coordinate moves to min(unconstrained peak,
// tightest cap from the opposite block). Feasibility is preserved and the
// dual value never decreases, which is what certificates need near optima
// whose rows or columns carry slack.
Vec dual_coordinate_ascent(Vec theta, const ProblemSpec& spec, const ScreeningState& state,
                           int passes) {
  const Index n = spec.n;
  const Index m = spec.m;
  const Vec y = marginals(spec);
  auto peak = [&](Index q) {
    if (spec.penalty == Penalty::L2) return y[static_cast<std::size_t>(q)];
    // KL: argmax of -y e^{-th} + y - eps th; unbounded cap kept under the
    // exp clamp when eps = 0
    if (spec.epsilon <= 0.0) return 699.0;
    return std::min(699.0, std::log(y[static_cast<std::size_t>(q)] / spec.epsilon));
  };
  Vec cap(static_cast<std::size_t>(std::max(n, m)));
  for (int pass = 0; pass < passes; ++pass) {
    for (int block = 0; block < 2; ++block) {
      const Index len = block == 0 ? n : m;
      std::fill(cap.begin(), cap.begin() + len, std::numeric_limits<double>::infinity());
      for (Index p : state.active_to_original) {
        const Index i = p / m;
        const Index j = p % m;
        const double lc = spec.lambda * spec.c[static_cast<std::size_t>(p)];
        if (block == 0)
          cap[static_cast<std::size_t>(i)] =
              std::min(cap[static_cast<std::size_t>(i)], lc - theta[static_cast<std::size_t>(n + j)]);
        else
          cap[static_cast<std::size_t>(j)] =
              std::min(cap[static_cast<std::size_t>(j)], lc - theta[static_cast<std::size_t>(i)]);
      }
      for (Index q = 0; q < len; ++q) {
        const Index coord = block == 0 ? q : n + q;
        theta[static_cast<std::size_t>(coord)] =
            std::min(peak(coord), cap[static_cast<std::size_t>(q)]);
      }
    }
  }
  return theta;
}

}  // namespace

DualCertificate dual_certificate(std::span<const double> t_active, const ProblemSpec& spec,
                                 const ScreeningState& state) {
  const PenaltyModel model = make_penalty_model(spec);
  const Vec theta_raw = dual_from_primal(t_active, spec, state);

  DualCertificate best;
  best.dual = -kInf;
  auto consider = [&](Vec&& theta) {
    bool clamped = false;
    const double d = dual_value(theta, model, &clamped);
    if (clamped) return;  // a clamped value may overestimate D
    if (d > best.dual) {
      best.dual = d;
      best.theta = std::move(theta);
    }
  };
  consider(shifting_projection(theta_raw, spec, state));
  try {
    consider(residuals_rescale(theta_raw, spec, state));
  } catch (const DegenerateError&) {
    // zero-cost entry with a violated constraint: rescaling unavailable
  }
  // strict feasibility here: a point violating a constraint by even 1e-10
  // can overshoot the dual optimum and break weak duality
  if (max_constraint_violation(theta_raw, spec, state) <= 0.0) consider(Vec(theta_raw));

  if (std::isfinite(best.dual))
    consider(dual_coordinate_ascent(best.theta, spec, state, 2));

  if (!std::isfinite(best.dual)) {
    // every candidate clamped; fall back to the always-feasible projection
    best.theta = shifting_projection(theta_raw, spec, state);
    best.dual = -kInf;
  }
  best.primal = primal_objective(t_active, spec, state);
  best.gap = best.primal - best.dual;
  return best;
}

RunResult run_with_screening(const ProblemSpec& spec, const SolverConfig& config) {
  spec.validate();
  require_solver_penalty(config.kind, spec.penalty);
  require_supported(config.method, spec.penalty);
  if (config.screen_period < 1) throw DomainError("screen_period must be >= 1");
  if (!(config.gap_tol > 0.0)) throw DomainError("gap_tol must be positive");

  const double step = config.stepsize.value_or(default_stepsize(config.kind, spec));
  ScreeningState state = ScreeningState::full(spec.nm());
  Vec c_active(spec.c);

  FistaState it;
  it.t.assign(static_cast<std::size_t>(spec.nm()), 0.0);
  if (config.kind == SolverKind::MM) {
    // positive initialization keeps the multiplicative updates alive
    double mass_a = 0.0, mass_b = 0.0;
    for (double v : spec.a) mass_a += v;
    for (double v : spec.b) mass_b += v;
    const double denom = std::max(mass_a + mass_b, 1e-12);
    for (Index p = 0; p < spec.nm(); ++p) {
      const Index i = p / spec.m;
      const Index j = p % spec.m;
      it.t[static_cast<std::size_t>(p)] =
          std::max(2.0 * spec.a[static_cast<std::size_t>(i)] * spec.b[static_cast<std::size_t>(j)] / denom,
                   1e-12);
    }
  }
  it.t_prev = it.t;

  RunResult res;
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed_ns = [&]() {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };

  std::uint64_t screen_events = 0;
  double gap = kInf;
  Index k = 0;
  for (;; ++k) {
    const bool check = (k % config.screen_period == 0) || k >= config.max_iters ||
                       state.active_count() == 0;
    if (check) {
      const DualCertificate cert = dual_certificate(it.t, spec, state);
      gap = cert.gap;
      res.trace.push_back(IterateTrace{k, cert.primal, cert.dual, gap,
                                       state.screened_count, elapsed_ns()});
      if (gap <= config.gap_tol) {
        res.converged = true;
        break;
      }
      if (state.active_count() == 0) {
        // every entry carries a zero certificate, so t = 0 is exact
        res.converged = true;
        break;
      }
      if (k >= config.max_iters) break;
      if (config.method != ScreenMethod::None) {
        // momentum companions shrink in lockstep so acceleration survives
        // the deletions; screened entries are certified zeros, so dropping
        // them barely perturbs the extrapolation
        const ScreenReport rep =
            screen_all(cert.theta, it.t, c_active, spec, state, config.method,
                       config.seed + screen_events, {&it.t_prev});
        ++screen_events;
        if (rep.screened > 0 && state.active_count() == 0) continue;
      }
    }
    if (k >= config.max_iters) break;
    switch (config.kind) {
      case SolverKind::Fista: fista_step(it, spec, state, step); break;
      case SolverKind::MM: mm_step(it.t, spec, state, step); break;
      case SolverKind::CD: cd_step(it.t, spec, state); break;
    }
  }

  res.t = inflate(it.t, state);
  res.final_gap = gap;
  res.iters = k;
  res.screened = state.screened_count;
  res.state = std::move(state);
  return res;
}

}  // namespace uot
