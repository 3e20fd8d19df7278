#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "uot/regions.hpp"
#include "uot/types.hpp"

namespace uot {

enum class ScreenMethod { None, Gap, Sa, Ell, Dome, GapCtp, SaCtp, EllCtp, SaRan };

ScreenMethod screen_method_from_string(const std::string& s);
std::string to_string(ScreenMethod m);

// Feasibility matrix of method x penalty. Sasvi-based methods need the l2
// dual geometry; ellipse-based methods need the KL box metric; TV has no
// curvature at all.
bool method_supported(ScreenMethod method, Penalty penalty);
void require_supported(ScreenMethod method, Penalty penalty);

// Aggregated half-space sum_l (x_l^T theta - lambda c_l) t_l <= 0 written as
// normal^T theta <= offset.
struct Halfspace {
  Vec normal;      // length n+m
  double offset = 0.0;
};

struct HalfspacePair {
  Halfspace primary;    // constraints in the row/column cross of p
  Halfspace secondary;  // the complement; zero coefficients at p's coordinates
};

// normal = X t reflected into dual space (row sums then column sums),
// offset = lambda c^T t. t = 0 yields the trivial whole-space half-space.
Halfspace dome_halfspace(std::span<const double> t_active, const ProblemSpec& spec,
                         const ScreeningState& state);

// Splits the dome sum into the cross of row i and column j versus the rest;
// primary + secondary equals the dome data by construction.
HalfspacePair ctp_halfspaces(Index p, std::span<const double> t_active,
                             const ProblemSpec& spec, const ScreeningState& state);

// Closed-form maxima of x_p^T theta over a region; x_p has two unit entries.
double max_over_ball(Index p, const BallRegion& ball, Index n, Index m);
double max_over_ellipse(Index p, const EllipseRegion& ellipse, Index n, Index m);

// Maximum of x_p^T theta over region ∩ both half-spaces. Solves the
// three-constraint KKT system through its quadratic in the sphere multiplier;
// every multiplier-feasible root and every relaxation (region only, region ∩
// one half-space, region ∩ aggregated dome) is a valid upper bound, and the
// smallest one is returned. Singular Gram data falls back to the dome value.
double ctp_max(Index p, const BallRegion& ball, const HalfspacePair& pair,
               Index n, Index m);
double ctp_max(Index p, const EllipseRegion& ellipse, const HalfspacePair& pair,
               Index n, Index m);

struct ScreenReport {
  Index tested = 0;
  Index screened = 0;
  // Screening was skipped this round (clamped dual evaluation or vacuous KL
  // box); nothing was screened.
  bool skipped = false;
};

// Precomputed aggregates for one screening pass: row/column sums, cost
// masses and metric-weighted Gram pieces, O(nm) to build, O(1) per element.
struct ScreenContext;

class ScreenPass {
 public:
  // theta_feasible must satisfy the active constraints (checked); gap is
  // Gap(t, theta_feasible).
  ScreenPass(const Vec& theta_feasible, double gap, std::span<const double> t_active,
             const ProblemSpec& spec, const ScreeningState& state,
             ScreenMethod method, std::uint64_t ran_seed = 0);
  ~ScreenPass();
  ScreenPass(const ScreenPass&) = delete;
  ScreenPass& operator=(const ScreenPass&) = delete;

  bool usable() const;  // false when the pass must conservatively skip
  // Upper bound on x_p^T theta over the method's safe region (p original,
  // must be active).
  double element_bound(Index p) const;
  // bound < lambda c_p - 1e-12
  bool screen_element(Index p) const;
  // Same tests addressed by position in the compacted vectors.
  double bound_at(std::size_t active_pos) const;
  bool screen_at(std::size_t active_pos) const;

 private:
  ScreenContext* ctx_;
};

// Tests every active element, updates the mask permanently via compact and
// shrinks t and c_active in place; extra vectors (solver momentum companions)
// shrink in lockstep.
ScreenReport screen_all(const Vec& theta_feasible, Vec& t, Vec& c_active,
                        const ProblemSpec& spec, ScreeningState& state,
                        ScreenMethod method, std::uint64_t ran_seed = 0,
                        const std::vector<Vec*>& extra = {});

}  // namespace uot
