#include "uot/screening.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "uot/core.hpp"
#include "uot/penalty.hpp"

namespace uot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kScreenMargin = 1e-12;
// Near-tangent half-spaces make the cap and KKT closed forms lose up to
// ~sqrt(machine eps) of the region scale to cancellation (observed ~1e-10
// undershoots), so the strictness test adds a region-scaled guard that
// vanishes as the region shrinks.
constexpr double kScreenRelMargin = 1e-7;

struct PlaneScalars {
  double g = 0.0;  // ghat . nhat
  double G = 0.0;  // ||nhat||^2
  double e = 0.0;  // offset relative to the region center
};

// Exact maximum of ghat^T z over the unit ball intersected with one
// half-space {nhat^T z <= e}. gg = ||ghat||^2.
double cap_max(double gg, const PlaneScalars& h) {
  const double ball = std::sqrt(std::max(gg, 0.0));
  if (!std::isfinite(h.G) || !std::isfinite(h.g) || !std::isfinite(h.e)) return ball;
  if (h.G <= 1e-300) return ball;            // zero normal: trivial half-space
  if (h.g <= h.e * ball) return ball;        // ball maximizer already feasible
  if (h.e <= -std::sqrt(h.G)) return ball;   // numerically empty: stay conservative
  const double t1 = std::max(gg - h.g * h.g / h.G, 0.0);
  const double t2 = std::max(1.0 - h.e * h.e / h.G, 0.0);
  const double rim = h.e * h.g / h.G + std::sqrt(t1 * t2);
  return std::min(rim, ball);
}

// KKT closed form with the sphere and both half-spaces active: eliminate the
// plane multipliers linearly in the sphere multiplier eta, leaving a
// quadratic. A multiplier-feasible root is a global maximizer, hence a valid
// upper bound.
void quad_candidates(double gg, const PlaneScalars& h1, const PlaneScalars& h2,
                     double cross, std::vector<double>& out) {
  const double gram = h1.G * h2.G - cross * cross;
  if (!std::isfinite(gram) || gram <= 1e-12 * std::max(h1.G * h2.G, 1e-300)) return;
  const double s1 = 2.0 * (h2.e * cross - h1.e * h2.G) / gram;
  const double s2 = (h1.g * h2.G - h2.g * cross) / gram;
  const double u1 = 2.0 * (h1.e * cross - h2.e * h1.G) / gram;
  const double u2 = (h2.g * h1.G - h1.g * cross) / gram;

  const double A = s1 * s1 * h1.G + u1 * u1 * h2.G + 2.0 * s1 * u1 * cross - 4.0;
  const double B = -2.0 * s1 * h1.g - 2.0 * u1 * h2.g + 2.0 * s1 * s2 * h1.G +
                   2.0 * u1 * u2 * h2.G + 2.0 * (s1 * u2 + s2 * u1) * cross;
  const double C = gg - 2.0 * s2 * h1.g - 2.0 * u2 * h2.g + s2 * s2 * h1.G +
                   u2 * u2 * h2.G + 2.0 * s2 * u2 * cross;
  if (!std::isfinite(A) || !std::isfinite(B) || !std::isfinite(C)) return;

  double roots[2];
  int nroots = 0;
  if (std::abs(A) < 1e-300) {
    if (std::abs(B) > 1e-300) roots[nroots++] = -C / B;
  } else {
    const double disc = B * B - 4.0 * A * C;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double q = -0.5 * (B + std::copysign(sq, B));
      if (std::abs(q) > 1e-300) {
        roots[nroots++] = q / A;
        roots[nroots++] = C / q;
      } else {
        roots[nroots++] = 0.0;
      }
    }
  }
  const double ball = std::sqrt(std::max(gg, 0.0));
  const double eta_min = 1e-14 * (1.0 + ball);
  for (int r = 0; r < nroots; ++r) {
    const double eta = roots[r];
    if (!(eta > eta_min)) continue;
    const double mu = s1 * eta + s2;
    const double nu = u1 * eta + u2;
    if (mu < -kScreenMargin || nu < -kScreenMargin) continue;
    const double val = (gg - mu * h1.g - nu * h2.g) / (2.0 * eta);
    // any genuine objective over a ball subset lies in [-||ghat||, ||ghat||]
    if (std::isfinite(val) && val >= -ball - 1e-9 && val <= ball + 1e-9)
      out.push_back(val);
  }
}

struct TwoPlaneInput {
  double gg = 0.0;
  std::optional<PlaneScalars> h1, h2, dome;
  double cross = 0.0;  // nhat1 . nhat2
};

double max_delta(const TwoPlaneInput& in) {
  double best = std::sqrt(std::max(in.gg, 0.0));
  if (in.dome) best = std::min(best, cap_max(in.gg, *in.dome));
  if (in.h1) best = std::min(best, cap_max(in.gg, *in.h1));
  if (in.h2) best = std::min(best, cap_max(in.gg, *in.h2));
  if (in.h1 && in.h2) {
    std::vector<double> cands;
    quad_candidates(in.gg, *in.h1, *in.h2, in.cross, cands);
    for (double v : cands) best = std::min(best, v);
  }
  return best;
}

}  // namespace

ScreenMethod screen_method_from_string(const std::string& s) {
  if (s == "none") return ScreenMethod::None;
  if (s == "gap") return ScreenMethod::Gap;
  if (s == "sa") return ScreenMethod::Sa;
  if (s == "ell") return ScreenMethod::Ell;
  if (s == "dome") return ScreenMethod::Dome;
  if (s == "gap-ctp") return ScreenMethod::GapCtp;
  if (s == "sa-ctp") return ScreenMethod::SaCtp;
  if (s == "ell-ctp") return ScreenMethod::EllCtp;
  if (s == "sa-ran") return ScreenMethod::SaRan;
  throw ParseError("unknown screening method '" + s + "'");
}

std::string to_string(ScreenMethod m) {
  switch (m) {
    case ScreenMethod::None: return "none";
    case ScreenMethod::Gap: return "gap";
    case ScreenMethod::Sa: return "sa";
    case ScreenMethod::Ell: return "ell";
    case ScreenMethod::Dome: return "dome";
    case ScreenMethod::GapCtp: return "gap-ctp";
    case ScreenMethod::SaCtp: return "sa-ctp";
    case ScreenMethod::EllCtp: return "ell-ctp";
    case ScreenMethod::SaRan: return "sa-ran";
  }
  return "?";
}

bool method_supported(ScreenMethod method, Penalty penalty) {
  if (method == ScreenMethod::None) return true;
  switch (penalty) {
    case Penalty::L2:
      return method == ScreenMethod::Gap || method == ScreenMethod::Sa ||
             method == ScreenMethod::Dome || method == ScreenMethod::GapCtp ||
             method == ScreenMethod::SaCtp || method == ScreenMethod::SaRan;
    case Penalty::KL:
      return method == ScreenMethod::Gap || method == ScreenMethod::Ell ||
             method == ScreenMethod::Dome || method == ScreenMethod::GapCtp ||
             method == ScreenMethod::EllCtp;
    case Penalty::TV:
      return false;
  }
  return false;
}

void require_supported(ScreenMethod method, Penalty penalty) {
  if (!method_supported(method, penalty))
    throw UnsupportedError("screening method '" + to_string(method) +
                           "' is not safe under penalty '" + to_string(penalty) + "'");
}

Halfspace dome_halfspace(std::span<const double> t_active, const ProblemSpec& spec,
                         const ScreeningState& state) {
  Halfspace h;
  h.normal = apply_X(t_active, state, spec.n, spec.m);
  double ct = 0.0;
  for (std::size_t k = 0; k < t_active.size(); ++k)
    ct += spec.c[static_cast<std::size_t>(state.active_to_original[k])] * t_active[k];
  h.offset = spec.lambda * ct;
  return h;
}

HalfspacePair ctp_halfspaces(Index p, std::span<const double> t_active,
                             const ProblemSpec& spec, const ScreeningState& state) {
  const Index n = spec.n;
  const Index m = spec.m;
  const auto [pi, pj] = pair_index(p, n, m);
  HalfspacePair pair;
  pair.primary.normal.assign(static_cast<std::size_t>(n + m), 0.0);
  pair.secondary.normal.assign(static_cast<std::size_t>(n + m), 0.0);
  for (std::size_t k = 0; k < t_active.size(); ++k) {
    const Index q = state.active_to_original[k];
    const Index i = q / m;
    const Index j = q % m;
    Halfspace& side = (i == pi || j == pj) ? pair.primary : pair.secondary;
    side.normal[static_cast<std::size_t>(i)] += t_active[k];
    side.normal[static_cast<std::size_t>(n + j)] += t_active[k];
    side.offset += spec.lambda * spec.c[static_cast<std::size_t>(q)] * t_active[k];
  }
  return pair;
}

double max_over_ball(Index p, const BallRegion& ball, Index n, Index m) {
  const auto [i, j] = pair_index(p, n, m);
  return ball.center[static_cast<std::size_t>(i)] +
         ball.center[static_cast<std::size_t>(n + j)] +
         ball.radius * std::sqrt(2.0);
}

double max_over_ellipse(Index p, const EllipseRegion& ellipse, Index n, Index m) {
  const auto [i, j] = pair_index(p, n, m);
  const double gg = ellipse.radius_sq * (1.0 / ellipse.metric[static_cast<std::size_t>(i)] +
                                         1.0 / ellipse.metric[static_cast<std::size_t>(n + j)]);
  return ellipse.center[static_cast<std::size_t>(i)] +
         ellipse.center[static_cast<std::size_t>(n + j)] + std::sqrt(std::max(gg, 0.0));
}

namespace {

// Shared materialized-pair implementation of ctp_max.
double ctp_max_impl(Index p, const Vec& center, const Vec& metric, double radius_sq,
                    const HalfspacePair& pair, Index n, Index m) {
  const auto [i, j] = pair_index(p, n, m);
  const std::size_t i1 = static_cast<std::size_t>(i);
  const std::size_t i2 = static_cast<std::size_t>(n + j);
  const double center_sum = center[i1] + center[i2];
  if (radius_sq <= 0.0) return center_sum;

  const std::size_t dim = center.size();
  auto invL = [&](std::size_t k) { return radius_sq / metric[k]; };

  TwoPlaneInput in;
  in.gg = invL(i1) + invL(i2);
  PlaneScalars h1, h2, dome;
  double cross = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    const double il = invL(k);
    const double v = pair.primary.normal[k];
    const double w = pair.secondary.normal[k];
    h1.G += v * v * il;
    h2.G += w * w * il;
    cross += v * w * il;
    dome.G += (v + w) * (v + w) * il;
    h1.e -= v * center[k];
    h2.e -= w * center[k];
  }
  h1.e += pair.primary.offset;
  h2.e += pair.secondary.offset;
  dome.e = h1.e + h2.e;
  h1.g = pair.primary.normal[i1] * invL(i1) + pair.primary.normal[i2] * invL(i2);
  h2.g = pair.secondary.normal[i1] * invL(i1) + pair.secondary.normal[i2] * invL(i2);
  dome.g = h1.g + h2.g;
  in.h1 = h1;
  in.h2 = h2;
  in.dome = dome;
  in.cross = cross;
  return center_sum + max_delta(in);
}

}  // namespace

double ctp_max(Index p, const BallRegion& ball, const HalfspacePair& pair,
               Index n, Index m) {
  const Vec ones(ball.center.size(), 1.0);
  return ctp_max_impl(p, ball.center, ones, ball.radius * ball.radius, pair, n, m);
}

double ctp_max(Index p, const EllipseRegion& ellipse, const HalfspacePair& pair,
               Index n, Index m) {
  return ctp_max_impl(p, ellipse.center, ellipse.metric, ellipse.radius_sq, pair, n, m);
}

// ---------------------------------------------------------------------------
// Screening pass with O(nm) precomputation and O(1) per-element bounds.

struct ScreenContext {
  const ProblemSpec* spec = nullptr;
  const ScreeningState* state = nullptr;
  std::span<const double> t;
  Index n = 0, m = 0;
  ScreenMethod method = ScreenMethod::None;
  bool usable = false;
  bool point_region = false;
  bool use_dome = false, use_ctp = false, use_ran = false;

  Vec center;
  Vec invL;  // radius_sq / metric_k

  Vec rowsum, colsum;   // row/column sums of active t
  Vec rowct, colct;     // cost mass per row/column (without lambda)
  double total_ct = 0.0;
  Vec rowQ, colQ;       // sum of t^2 * invL over the opposite block
  Vec rowD, colD;       // sum of t * (opposite sum) * invL
  Vec rowTh, colTh;     // sum of t * center over the opposite block
  double Gdd = 0.0, dTh = 0.0, e_dome = 0.0;

  // sa-ran split
  Vec vR;
  double GvRvR = 0.0, GvRd = 0.0, vRTh = 0.0, e_vR = 0.0;

  double bound_for(std::size_t k) const;
  double screen_margin(std::size_t k) const;
  Index active_pos(Index p) const;
};

double ScreenContext::screen_margin(std::size_t k) const {
  if (point_region) return kScreenMargin;
  const Index p = state->active_to_original[k];
  const double gg = invL[static_cast<std::size_t>(p / m)] +
                    invL[static_cast<std::size_t>(n + p % m)];
  return kScreenMargin + kScreenRelMargin * std::sqrt(std::max(gg, 0.0));
}

Index ScreenContext::active_pos(Index p) const {
  const auto& a2o = state->active_to_original;
  auto it = std::lower_bound(a2o.begin(), a2o.end(), p);
  if (it == a2o.end() || *it != p)
    throw ContractError("screen_element: index is not active");
  return static_cast<Index>(it - a2o.begin());
}

double ScreenContext::bound_for(std::size_t k) const {
  const Index p = state->active_to_original[k];
  const Index i = p / m;
  const Index j = p % m;
  const std::size_t i1 = static_cast<std::size_t>(i);
  const std::size_t i2 = static_cast<std::size_t>(n + j);
  const double center_sum = center[i1] + center[i2];
  if (point_region) return center_sum;

  const double il1 = invL[i1];
  const double il2 = invL[i2];
  TwoPlaneInput in;
  in.gg = il1 + il2;

  const double rs = rowsum[i1];
  const double cs = colsum[static_cast<std::size_t>(j)];
  if (use_dome || use_ctp || use_ran) {
    PlaneScalars dome;
    dome.g = rs * il1 + cs * il2;
    dome.G = Gdd;
    dome.e = e_dome - dTh;
    in.dome = dome;
  }
  if (use_ctp) {
    const double tij = t[k];
    const double cp = spec->c[static_cast<std::size_t>(p)];
    PlaneScalars h1;
    h1.g = rs * il1 + cs * il2;
    h1.G = rs * rs * il1 + cs * cs * il2 +
           (colQ[static_cast<std::size_t>(j)] - tij * tij * il1) +
           (rowQ[i1] - tij * tij * il2);
    const double Gvd = rs * rs * il1 + cs * cs * il2 +
                       (colD[static_cast<std::size_t>(j)] - tij * rs * il1) +
                       (rowD[i1] - tij * cs * il2);
    const double vTh = rs * center[i1] + cs * center[i2] +
                       (colTh[static_cast<std::size_t>(j)] - tij * center[i1]) +
                       (rowTh[i1] - tij * center[i2]);
    const double ev_raw = spec->lambda * (rowct[i1] + colct[static_cast<std::size_t>(j)] - cp * tij);
    h1.e = ev_raw - vTh;
    PlaneScalars h2;
    h2.g = 0.0;  // secondary normal vanishes at p's coordinates
    h2.G = std::max(Gdd - 2.0 * Gvd + h1.G, 0.0);
    h2.e = (e_dome - ev_raw) - (dTh - vTh);
    in.h1 = h1;
    in.h2 = h2;
    in.cross = Gvd - h1.G;
  }
  if (use_ran) {
    PlaneScalars h1;
    h1.g = vR[i1] * il1 + vR[i2] * il2;
    h1.G = GvRvR;
    h1.e = e_vR - vRTh;
    PlaneScalars h2;
    h2.g = (rs - vR[i1]) * il1 + (cs - vR[i2]) * il2;
    h2.G = std::max(Gdd - 2.0 * GvRd + GvRvR, 0.0);
    h2.e = (e_dome - e_vR) - (dTh - vRTh);
    in.h1 = h1;
    in.h2 = h2;
    in.cross = GvRd - GvRvR;
  }
  return center_sum + max_delta(in);
}

ScreenPass::ScreenPass(const Vec& theta_feasible, double gap,
                       std::span<const double> t_active, const ProblemSpec& spec,
                       const ScreeningState& state, ScreenMethod method,
                       std::uint64_t ran_seed)
    : ctx_(new ScreenContext) {
  require_supported(method, spec.penalty);
  ScreenContext& c = *ctx_;
  c.spec = &spec;
  c.state = &state;
  c.t = t_active;
  c.n = spec.n;
  c.m = spec.m;
  c.method = method;
  if (method == ScreenMethod::None) return;
  if (!is_dual_feasible(theta_feasible, spec, state))
    throw ContractError("ScreenPass: theta is not dual feasible");
  if (gap < 0.0) gap = 0.0;

  c.use_dome = method == ScreenMethod::Sa || method == ScreenMethod::Dome ||
               method == ScreenMethod::GapCtp || method == ScreenMethod::SaCtp ||
               method == ScreenMethod::EllCtp || method == ScreenMethod::SaRan;
  c.use_ctp = method == ScreenMethod::GapCtp || method == ScreenMethod::SaCtp ||
              method == ScreenMethod::EllCtp;
  c.use_ran = method == ScreenMethod::SaRan;

  const Vec y = marginals(spec);
  Vec metric(static_cast<std::size_t>(spec.n + spec.m), 1.0);
  double radius_sq = 0.0;
  const bool sasvi = method == ScreenMethod::Sa || method == ScreenMethod::SaCtp ||
                     method == ScreenMethod::SaRan;
  const bool ellipse = method == ScreenMethod::Ell || method == ScreenMethod::EllCtp;
  if (sasvi) {
    BallRegion ball = sasvi_ball(theta_feasible, y, spec.penalty);
    c.center = std::move(ball.center);
    radius_sq = ball.radius * ball.radius;
  } else if (spec.penalty == Penalty::L2) {
    c.center = theta_feasible;
    radius_sq = 2.0 * gap;  // L = 1
  } else {
    // KL: box bounds license the blockwise metric.
    KlBoxResult box = kl_box(theta_feasible, t_active, spec, state);
    if (box.clamped || box.vacuous) return;  // conservatively skip this pass
    Vec L = blockwise_metric(box.box, y);
    double Lmin = kInf;
    for (double v : L) Lmin = std::min(Lmin, v);
    if (!(Lmin > 0.0)) return;
    c.center = theta_feasible;
    if (ellipse) {
      metric = std::move(L);
      radius_sq = 2.0 * gap;
    } else {
      radius_sq = 2.0 * gap / Lmin;
    }
  }
  c.usable = true;
  if (radius_sq <= 0.0) {
    c.point_region = true;
    return;
  }

  const std::size_t dim = static_cast<std::size_t>(spec.n + spec.m);
  c.invL.resize(dim);
  for (std::size_t k = 0; k < dim; ++k) c.invL[k] = radius_sq / metric[k];

  c.rowsum.assign(static_cast<std::size_t>(spec.n), 0.0);
  c.colsum.assign(static_cast<std::size_t>(spec.m), 0.0);
  c.rowct.assign(static_cast<std::size_t>(spec.n), 0.0);
  c.colct.assign(static_cast<std::size_t>(spec.m), 0.0);
  for (std::size_t k = 0; k < t_active.size(); ++k) {
    const Index p = state.active_to_original[k];
    const Index i = p / spec.m;
    const Index j = p % spec.m;
    const double tv = t_active[k];
    c.rowsum[static_cast<std::size_t>(i)] += tv;
    c.colsum[static_cast<std::size_t>(j)] += tv;
    const double ct = spec.c[static_cast<std::size_t>(p)] * tv;
    c.rowct[static_cast<std::size_t>(i)] += ct;
    c.colct[static_cast<std::size_t>(j)] += ct;
    c.total_ct += ct;
  }
  c.e_dome = spec.lambda * c.total_ct;
  for (Index i = 0; i < spec.n; ++i) {
    const double d = c.rowsum[static_cast<std::size_t>(i)];
    c.Gdd += d * d * c.invL[static_cast<std::size_t>(i)];
    c.dTh += d * c.center[static_cast<std::size_t>(i)];
  }
  for (Index j = 0; j < spec.m; ++j) {
    const double d = c.colsum[static_cast<std::size_t>(j)];
    c.Gdd += d * d * c.invL[static_cast<std::size_t>(spec.n + j)];
    c.dTh += d * c.center[static_cast<std::size_t>(spec.n + j)];
  }

  if (c.use_ctp) {
    c.rowQ.assign(static_cast<std::size_t>(spec.n), 0.0);
    c.colQ.assign(static_cast<std::size_t>(spec.m), 0.0);
    c.rowD.assign(static_cast<std::size_t>(spec.n), 0.0);
    c.colD.assign(static_cast<std::size_t>(spec.m), 0.0);
    c.rowTh.assign(static_cast<std::size_t>(spec.n), 0.0);
    c.colTh.assign(static_cast<std::size_t>(spec.m), 0.0);
    for (std::size_t k = 0; k < t_active.size(); ++k) {
      const Index p = state.active_to_original[k];
      const Index i = p / spec.m;
      const Index j = p % spec.m;
      const double tv = t_active[k];
      const double ilr = c.invL[static_cast<std::size_t>(i)];
      const double ilc = c.invL[static_cast<std::size_t>(spec.n + j)];
      c.rowQ[static_cast<std::size_t>(i)] += tv * tv * ilc;
      c.colQ[static_cast<std::size_t>(j)] += tv * tv * ilr;
      c.rowD[static_cast<std::size_t>(i)] += tv * c.colsum[static_cast<std::size_t>(j)] * ilc;
      c.colD[static_cast<std::size_t>(j)] += tv * c.rowsum[static_cast<std::size_t>(i)] * ilr;
      c.rowTh[static_cast<std::size_t>(i)] += tv * c.center[static_cast<std::size_t>(spec.n + j)];
      c.colTh[static_cast<std::size_t>(j)] += tv * c.center[static_cast<std::size_t>(i)];
    }
  }

  if (c.use_ran) {
    c.vR.assign(dim, 0.0);
    std::mt19937_64 rng(ran_seed);
    double e = 0.0;
    for (std::size_t k = 0; k < t_active.size(); ++k) {
      if ((rng() & 1u) == 0) continue;
      const Index p = state.active_to_original[k];
      const Index i = p / spec.m;
      const Index j = p % spec.m;
      c.vR[static_cast<std::size_t>(i)] += t_active[k];
      c.vR[static_cast<std::size_t>(spec.n + j)] += t_active[k];
      e += spec.c[static_cast<std::size_t>(p)] * t_active[k];
    }
    c.e_vR = spec.lambda * e;
    for (std::size_t k = 0; k < dim; ++k) {
      c.GvRvR += c.vR[k] * c.vR[k] * c.invL[k];
      c.vRTh += c.vR[k] * c.center[k];
      const double d = k < static_cast<std::size_t>(spec.n)
                           ? c.rowsum[k]
                           : c.colsum[k - static_cast<std::size_t>(spec.n)];
      c.GvRd += c.vR[k] * d * c.invL[k];
    }
  }
}

ScreenPass::~ScreenPass() { delete ctx_; }

bool ScreenPass::usable() const { return ctx_->usable; }

double ScreenPass::element_bound(Index p) const {
  if (!ctx_->usable) return kInf;
  return ctx_->bound_for(static_cast<std::size_t>(ctx_->active_pos(p)));
}

bool ScreenPass::screen_element(Index p) const {
  if (!ctx_->usable) return false;
  const std::size_t k = static_cast<std::size_t>(ctx_->active_pos(p));
  return ctx_->bound_for(k) < ctx_->spec->lambda * ctx_->spec->c[static_cast<std::size_t>(p)] -
                                  ctx_->screen_margin(k);
}

double ScreenPass::bound_at(std::size_t active_pos) const {
  if (!ctx_->usable) return kInf;
  return ctx_->bound_for(active_pos);
}

bool ScreenPass::screen_at(std::size_t active_pos) const {
  if (!ctx_->usable) return false;
  const Index p = ctx_->state->active_to_original[active_pos];
  return ctx_->bound_for(active_pos) <
         ctx_->spec->lambda * ctx_->spec->c[static_cast<std::size_t>(p)] -
             ctx_->screen_margin(active_pos);
}

ScreenReport screen_all(const Vec& theta_feasible, Vec& t, Vec& c_active,
                        const ProblemSpec& spec, ScreeningState& state,
                        ScreenMethod method, std::uint64_t ran_seed,
                        const std::vector<Vec*>& extra) {
  ScreenReport report;
  if (method == ScreenMethod::None) return report;
  require_supported(method, spec.penalty);
  const double gap = duality_gap(t, theta_feasible, spec, state);
  ScreenPass pass(theta_feasible, gap, t, spec, state, method, ran_seed);
  if (!pass.usable()) {
    report.skipped = true;
    return report;
  }
  std::vector<Index> newly;
  for (std::size_t k = 0; k < t.size(); ++k) {
    ++report.tested;
    if (pass.screen_at(k)) newly.push_back(state.active_to_original[k]);
  }
  report.screened = static_cast<Index>(newly.size());
  std::vector<Vec*> vectors{&t, &c_active};
  vectors.insert(vectors.end(), extra.begin(), extra.end());
  compact_vectors(state, newly, vectors);
  return report;
}

}  // namespace uot
