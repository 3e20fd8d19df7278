#pragma once

#include <span>
#include <vector>

#include "uot/types.hpp"

namespace uot {

// Xt: first n entries are row sums of the implied transport matrix, last m
// are column sums. O(active) time, O(n+m) extra space.
Vec apply_X(std::span<const double> t_active, const ScreeningState& state,
            Index n, Index m);

// (X^T theta)_p = theta_i + theta_{n+j} for active p = (i, j).
Vec apply_X_transpose(const Vec& theta, const ScreeningState& state,
                      Index n, Index m);

// lambda * c_active^T t + D_phi(Xt, y).
double primal_objective(std::span<const double> t_active, const ProblemSpec& spec,
                        const ScreeningState& state);

// Max over active p of theta_i + theta_{n+j} - lambda c_p (<= 0 means feasible).
double max_constraint_violation(const Vec& theta, const ProblemSpec& spec,
                                const ScreeningState& state);

bool is_dual_feasible(const Vec& theta, const ProblemSpec& spec,
                      const ScreeningState& state, double tol = 1e-9);

// P(t) - D(theta). Throws ContractError if theta violates an active
// constraint by more than 1e-9.
double duality_gap(std::span<const double> t_active, const Vec& theta,
                   const ProblemSpec& spec, const ScreeningState& state);

// Permanently removes newly_screened (original indices, all currently active)
// from the state and from the compacted vectors t and c.
void compact(ScreeningState& state, const std::vector<Index>& newly_screened,
             Vec& t, Vec& c);

// Same removal applied to any number of compacted vectors (solver iterates
// carry momentum companions that must shrink in lockstep).
void compact_vectors(ScreeningState& state, const std::vector<Index>& newly_screened,
                     const std::vector<Vec*>& vectors);

// Pads screened positions with zeros; result has length nm.
Vec inflate(std::span<const double> t_active, const ScreeningState& state);

}  // namespace uot
