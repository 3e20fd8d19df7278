#pragma once

#include <span>

#include "uot/types.hpp"

namespace uot {

// Penalty-specific primal divergence, dual function and derivatives.
//   L2: D_phi(z, y) = 1/2 ||z - y||^2,  D(theta) = -1/2||theta||^2 + y^T theta
//   KL: D_phi(z, y) = sum (z+eps) ln((z+eps)/y) - (z+eps) + y,
//       D(theta) = -sum y e^{-theta} + sum y - eps sum theta
//   TV: D_phi(z, y) = ||z - y||_1,  D(theta) = y^T theta inside the unit box,
//       -inf outside; no curvature, so no safe region exists.
struct PenaltyModel {
  Penalty kind = Penalty::L2;
  Vec y;
  double epsilon = 0.0;
};

PenaltyModel make_penalty_model(const ProblemSpec& spec);

// exp(-x) with x clamped to [-700, 700]; sets *clamped when the clamp fired.
double exp_neg_clamped(double x, bool* clamped = nullptr);

double divergence(const Vec& z, const PenaltyModel& model);

// TV returns -inf when ||theta||_inf >= 1. *clamped reports exp clamping (KL);
// a screening pass that sees the flag must not screen.
double dual_value(const Vec& theta, const PenaltyModel& model, bool* clamped = nullptr);

Vec dual_gradient(const Vec& theta, const PenaltyModel& model);

// Diagonal of the dual Hessian: L2 all -1, KL -y.*e^{-theta}, TV all 0.
Vec hessian_diag(const Vec& theta, const PenaltyModel& model);

// theta = -grad h(Xt): L2 gives y - Xt, KL gives ln(y ./ (Xt + eps)).
// Not guaranteed feasible. KL coordinates with y_j = 0 come back -inf and set
// *degenerate. KL log arguments are floored at 1e-300 so the result stays
// finite when a marginal sum vanishes.
Vec dual_from_primal(std::span<const double> t_active, const ProblemSpec& spec,
                     const ScreeningState& state, bool* degenerate = nullptr);

}  // namespace uot
