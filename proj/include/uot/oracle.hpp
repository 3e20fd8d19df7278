#pragma once

#include <span>

#include "uot/screening.hpp"
#include "uot/solvers.hpp"
#include "uot/types.hpp"

namespace uot {
namespace oracle {

struct Reference {
  Vec t_hat;      // length nm
  Vec theta_hat;  // feasible dual point certifying the gap
  double primal = 0.0;
  double gap = 0.0;
};

// Long-run plain solve (no screening) to gap <= 1e-12 for nm <= 2000. The gap
// certificate is recomputed through dense, independently coded objective
// evaluations and must agree to 1e-14 relative. Throws ConvergenceError when
// the certificate cannot be produced; callers skip, never silently pass.
Reference reference_solve(const ProblemSpec& spec);

std::vector<Index> true_support(const Vec& t_hat, double tol = 1e-9);

// Dense evaluations that materialize the transport matrix; deliberately a
// separate code path from apply_X / primal_objective.
double dense_primal(const Vec& t_full, const ProblemSpec& spec);
double dense_dual(const Vec& theta, const ProblemSpec& spec);

// Numerical maximization of theta_i + theta_{n+j} over an ellipse (metric,
// radius_sq around center; a ball is metric = 1) intersected with half-spaces:
// reduce to the <= 3-dimensional span of the objective and the normals, then
// dense sphere sampling with local refinement, cross-checked against the
// Lagrangian dual bound min_{mu,nu>=0} sum mu_h e_h + ||ghat - sum mu_h nhat_h||.
// Accuracy ~1e-7. Throws ConvergenceError if the primal/dual sandwich fails.
double brute_region_max(Index p, const Vec& center, const Vec& metric, double radius_sq,
                        std::span<const Halfspace> halfspaces, Index n, Index m);

double brute_region_max(Index p, const BallRegion& ball,
                        std::span<const Halfspace> halfspaces, Index n, Index m);
double brute_region_max(Index p, const EllipseRegion& ellipse,
                        std::span<const Halfspace> halfspaces, Index n, Index m);

// Exhaustive vertex enumeration of the balanced transport polytope
// {T >= 0, rows = a, cols = b} for n, m <= 4; returns the support of the
// minimum-cost vertex.
std::vector<Index> lp_vertex_support(const ProblemSpec& spec);

}  // namespace oracle
}  // namespace uot
