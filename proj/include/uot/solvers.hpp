#pragma once

#include <optional>

#include "uot/screening.hpp"
#include "uot/types.hpp"

namespace uot {

enum class SolverKind { Fista, MM, CD };

SolverKind solver_from_string(const std::string& s);
std::string to_string(SolverKind k);

struct SolverConfig {
  SolverKind kind = SolverKind::Fista;
  Index max_iters = 100000;
  double gap_tol = 1e-8;
  int screen_period = 10;  // w in the screening loop
  ScreenMethod method = ScreenMethod::None;
  std::optional<double> stepsize;  // defaults: FISTA 1/(n+m), MM 1/2
  std::uint64_t seed = 0;          // random-split screening only
};

// FISTA bookkeeping; t and t_prev live in the compacted index space.
struct FistaState {
  Vec t;
  Vec t_prev;
  double tau = 1.0;
  void reset_momentum() {
    t_prev = t;
    tau = 1.0;
  }
};

double default_stepsize(SolverKind kind, const ProblemSpec& spec);

// One accelerated proximal-gradient step for the l2 objective with the t >= 0
// constraint; momentum restarts on a gradient-mapping sign flip.
void fista_step(FistaState& it, const ProblemSpec& spec, const ScreeningState& state,
                double stepsize);

// Multiplicative majorization step. KL: t <- t exp(-s(lambda c + X^T ln((Xt+eps)/y)))
// with s = 1/2. l2: t <- t ((X^T y - lambda c)_+ / (X^T X t))^{2s}, the
// standard multiplicative update at the default s.
void mm_step(Vec& t, const ProblemSpec& spec, const ScreeningState& state,
             double stepsize);

// Cyclic exact coordinate minimization for l2 with cached row/column sums:
// t_p <- max(0, t_p - (lambda c_p + x_p^T(Xt - y))/2).
void cd_step(Vec& t, const ProblemSpec& spec, const ScreeningState& state);

// Feasible dual point with the best dual value among the shifting projection,
// residuals rescaling (when non-degenerate) and the unprojected point (when
// already feasible). The shifting projection alone is not idempotent at
// optima whose rows or columns carry no support, so certificates pick the
// best available feasible point.
struct DualCertificate {
  Vec theta;
  double dual = 0.0;
  double gap = 0.0;
  double primal = 0.0;
};

DualCertificate dual_certificate(std::span<const double> t_active, const ProblemSpec& spec,
                                 const ScreeningState& state);

struct RunResult {
  Vec t;  // inflated to length nm, zeros at screened positions
  std::vector<IterateTrace> trace;
  bool converged = false;
  double final_gap = 0.0;
  Index iters = 0;
  Index screened = 0;
  ScreeningState state;
};

// Algorithm loop: every w iterations project the dual point, certify the gap,
// build the method's safe region, test and permanently delete screened
// entries, then keep iterating on the shrunk problem.
RunResult run_with_screening(const ProblemSpec& spec, const SolverConfig& config);

}  // namespace uot
