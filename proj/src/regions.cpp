#include "uot/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uot/core.hpp"
#include "uot/penalty.hpp"

namespace uot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double kl_div_term(double z, double y, double eps) {
  const double ze = z + eps;
  if (y == 0.0) return ze > 0.0 ? kInf : 0.0;
  return (ze > 0.0 ? ze * std::log(ze / y) : 0.0) - ze + y;
}

}  // namespace

BallRegion gap_ball(const Vec& theta_feasible, double gap, double L) {
  if (!(L > 0.0)) throw UnsupportedError("gap_ball: nonpositive concavity constant");
  if (gap < 0.0) gap = 0.0;  // tolerate -1e-10 scale rounding
  return BallRegion{theta_feasible, std::sqrt(2.0 * gap / L)};
}

BallRegion sasvi_ball(const Vec& theta_feasible, const Vec& y, Penalty penalty) {
  if (penalty != Penalty::L2)
    throw UnsupportedError("sasvi_ball: only defined for the l2 penalty");
  if (theta_feasible.size() != y.size()) throw DimensionError("sasvi_ball: length mismatch");
  Vec center(y.size());
  double dist_sq = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    center[k] = 0.5 * (theta_feasible[k] + y[k]);
    const double d = y[k] - theta_feasible[k];
    dist_sq += d * d;
  }
  return BallRegion{std::move(center), 0.5 * std::sqrt(dist_sq)};
}

double kl_low_bound(const Vec& theta_feasible, std::span<const double> t_active,
                    Index q, const ProblemSpec& spec, const ScreeningState& state) {
  if (spec.penalty != Penalty::KL)
    throw UnsupportedError("kl_low_bound: requires the KL penalty");
  const Index n = spec.n;
  const Index m = spec.m;
  if (q < 0 || q >= n + m) throw DimensionError("kl_low_bound: coordinate out of range");
  const Vec y = marginals(spec);
  const double eps = spec.epsilon;

  // Naive O(nm) evaluation of P^q; kl_box has the batched counterpart.
  const Vec z = apply_X(t_active, state, n, m);
  double lin = 0.0;
  Vec zr(z);  // restricted sums after removing q's incident entries
  for (std::size_t k = 0; k < t_active.size(); ++k) {
    const Index p = state.active_to_original[k];
    const Index i = p / m;
    const Index j = p % m;
    const bool incident = (q < n) ? (i == q) : (j == q - n);
    if (incident) {
      zr[static_cast<std::size_t>(q < n ? n + j : i)] -= t_active[k];
      continue;
    }
    lin += spec.c[static_cast<std::size_t>(p)] * t_active[k];
  }
  double div = 0.0;
  for (Index k = 0; k < n + m; ++k) {
    if (k == q) continue;
    div += kl_div_term(std::max(zr[static_cast<std::size_t>(k)], 0.0),
                       y[static_cast<std::size_t>(k)], eps);
  }
  const double pj = spec.lambda * lin + div;
  const PenaltyModel model = make_penalty_model(spec);
  const double K = dual_value(theta_feasible, model) - pj;

  const double num = eps - y[static_cast<std::size_t>(q)];
  const double den = K - y[static_cast<std::size_t>(q)] + eps;
  if (!(num < 0.0) || !(den < 0.0)) return -kInf;  // bound unavailable
  return std::log(num / den);
}

KlBoxResult kl_box(const Vec& theta_feasible, std::span<const double> t_active,
                   const ProblemSpec& spec, const ScreeningState& state) {
  if (spec.penalty != Penalty::KL)
    throw UnsupportedError("kl_box: requires the KL penalty");
  const Index n = spec.n;
  const Index m = spec.m;
  const Vec y = marginals(spec);
  const double eps = spec.epsilon;
  const double lam = spec.lambda;

  const Vec z = apply_X(t_active, state, n, m);
  Vec div(static_cast<std::size_t>(n + m));
  double div_rows = 0.0, div_cols = 0.0;
  for (Index k = 0; k < n + m; ++k) {
    div[static_cast<std::size_t>(k)] = kl_div_term(z[static_cast<std::size_t>(k)],
                                                   y[static_cast<std::size_t>(k)], eps);
    (k < n ? div_rows : div_cols) += div[static_cast<std::size_t>(k)];
  }

  // Per-row/column cost mass and opposite-block divergence corrections from
  // removing that row/column's transport entries. One pass over active t.
  Vec row_ct(static_cast<std::size_t>(n), 0.0), col_ct(static_cast<std::size_t>(m), 0.0);
  Vec row_corr(static_cast<std::size_t>(n), 0.0), col_corr(static_cast<std::size_t>(m), 0.0);
  double total_ct = 0.0;
  for (std::size_t k = 0; k < t_active.size(); ++k) {
    const Index p = state.active_to_original[k];
    const Index i = p / m;
    const Index j = p % m;
    const double ct = spec.c[static_cast<std::size_t>(p)] * t_active[k];
    row_ct[static_cast<std::size_t>(i)] += ct;
    col_ct[static_cast<std::size_t>(j)] += ct;
    total_ct += ct;
    const double zc = std::max(z[static_cast<std::size_t>(n + j)] - t_active[k], 0.0);
    row_corr[static_cast<std::size_t>(i)] +=
        kl_div_term(zc, y[static_cast<std::size_t>(n + j)], eps) - div[static_cast<std::size_t>(n + j)];
    const double zrow = std::max(z[static_cast<std::size_t>(i)] - t_active[k], 0.0);
    col_corr[static_cast<std::size_t>(j)] +=
        kl_div_term(zrow, y[static_cast<std::size_t>(i)], eps) - div[static_cast<std::size_t>(i)];
  }

  KlBoxResult res;
  const PenaltyModel model = make_penalty_model(spec);
  const double dual = dual_value(theta_feasible, model, &res.clamped);

  Vec K(static_cast<std::size_t>(n + m));
  Vec low(static_cast<std::size_t>(n + m), -kInf);
  for (Index q = 0; q < n + m; ++q) {
    double pj;
    if (q < n) {
      pj = lam * (total_ct - row_ct[static_cast<std::size_t>(q)]) +
           (div_rows - div[static_cast<std::size_t>(q)]) +
           (div_cols + row_corr[static_cast<std::size_t>(q)]);
    } else {
      const Index v = q - n;
      pj = lam * (total_ct - col_ct[static_cast<std::size_t>(v)]) +
           (div_cols - div[static_cast<std::size_t>(q)]) +
           (div_rows + col_corr[static_cast<std::size_t>(v)]);
    }
    K[static_cast<std::size_t>(q)] = dual - pj;
    const double num = eps - y[static_cast<std::size_t>(q)];
    const double den = K[static_cast<std::size_t>(q)] - y[static_cast<std::size_t>(q)] + eps;
    if (num < 0.0 && den < 0.0) low[static_cast<std::size_t>(q)] = std::log(num / den);
  }

  Vec upper(static_cast<std::size_t>(n + m), kInf);
  for (Index i = 0; i < n; ++i) {
    double u = kInf;
    for (Index j = 0; j < m; ++j)
      u = std::min(u, lam * spec.c[static_cast<std::size_t>(i * m + j)] -
                          low[static_cast<std::size_t>(n + j)]);
    upper[static_cast<std::size_t>(i)] = u;
  }
  for (Index j = 0; j < m; ++j) {
    double u = kInf;
    for (Index i = 0; i < n; ++i)
      u = std::min(u, lam * spec.c[static_cast<std::size_t>(i * m + j)] -
                          low[static_cast<std::size_t>(i)]);
    upper[static_cast<std::size_t>(n + j)] = u;
  }
  if (eps > 0.0) {
    // D^q(theta_q) >= K^q and y e^{-theta} > 0 give theta_q <= (y_q - K^q)/eps.
    for (Index q = 0; q < n + m; ++q)
      upper[static_cast<std::size_t>(q)] =
          std::min(upper[static_cast<std::size_t>(q)],
                   (y[static_cast<std::size_t>(q)] - K[static_cast<std::size_t>(q)]) / eps);
  }

  // Widen so the projected point sits inside the box; the optimum stays
  // inside because widening only loosens.
  for (std::size_t k = 0; k < low.size(); ++k) {
    low[k] = std::min(low[k], theta_feasible[k]);
    upper[k] = std::max(upper[k], theta_feasible[k]);
    if (!std::isfinite(upper[k])) res.vacuous = true;
  }
  res.box = BoxBounds{std::move(low), std::move(upper)};
  return res;
}

Vec blockwise_metric(const BoxBounds& box, const Vec& y) {
  if (box.upper.size() != y.size()) throw DimensionError("blockwise_metric: length mismatch");
  Vec L(y.size());
  for (std::size_t k = 0; k < y.size(); ++k)
    L[k] = std::isfinite(box.upper[k]) ? y[k] * std::exp(-box.upper[k]) : 0.0;
  return L;
}

EllipseRegion gap_ellipse(const Vec& theta_feasible, double gap, const Vec& metric) {
  if (theta_feasible.size() != metric.size())
    throw DimensionError("gap_ellipse: length mismatch");
  for (double L : metric)
    if (!(L > 0.0)) throw UnsupportedError("gap_ellipse: metric must be positive");
  if (gap < 0.0) gap = 0.0;
  return EllipseRegion{theta_feasible, metric, 2.0 * gap};
}

}  // namespace uot
