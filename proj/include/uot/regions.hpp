#pragma once

#include <span>

#include "uot/types.hpp"

namespace uot {

// ||theta - center||^2 <= radius^2.
struct BallRegion {
  Vec center;
  double radius = 0.0;
};

// (theta - center)^T Diag(metric) (theta - center) <= radius_sq.
struct EllipseRegion {
  Vec center;
  Vec metric;  // positive entries
  double radius_sq = 0.0;
};

// Per-coordinate bounds on the dual optimum; +-inf entries are allowed.
struct BoxBounds {
  Vec lower;
  Vec upper;
};

// Ball of radius sqrt(2 gap / L) around a feasible theta. L is the (local)
// strong-concavity constant: 1 for the l2 dual, the smallest blockwise metric
// entry over the box for KL.
BallRegion gap_ball(const Vec& theta_feasible, double gap, double L);

// Sphere with diameter endpoints theta_feasible and y; l2 only.
BallRegion sasvi_ball(const Vec& theta_feasible, const Vec& y, Penalty penalty);

// Lower bound on the j-th coordinate of the KL dual optimum,
//   Low = ln((eps - y_j) / (K^j - y_j + eps)),  K^j = D(theta) - P^j(t),
// where P^j drops coordinate j's divergence term, the cost terms of its
// incident transport entries, and their contribution to the opposite-block
// sums. Returns -inf when the sign check K^j - y_j + eps < 0 fails.
double kl_low_bound(const Vec& theta_feasible, std::span<const double> t_active,
                    Index j, const ProblemSpec& spec, const ScreeningState& state);

struct KlBoxResult {
  BoxBounds box;
  bool vacuous = false;    // some coordinate has no finite upper bound
  bool clamped = false;    // dual evaluation hit the exp clamp
};

// Assembles the KL box: lower_j = Low(theta, j); a row coordinate's upper is
// min_v (lambda c_{u,v} - Low(n+v)) over all original columns (symmetrically
// for columns); with eps > 0 the upper is also capped by (y_j - K^j)/eps.
// Both bounds are then widened to include theta_feasible so the box contains
// the projected point as well as the optimum. O(nm) total.
KlBoxResult kl_box(const Vec& theta_feasible, std::span<const double> t_active,
                   const ProblemSpec& spec, const ScreeningState& state);

// L_j = y_j * e^{-upper_j}; coordinates with upper = +inf get a zero entry,
// which callers must treat as "no usable metric".
Vec blockwise_metric(const BoxBounds& box, const Vec& y);

EllipseRegion gap_ellipse(const Vec& theta_feasible, double gap, const Vec& metric);

}  // namespace uot
