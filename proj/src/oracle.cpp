#include "uot/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "uot/core.hpp"
#include "uot/penalty.hpp"

namespace uot {
namespace oracle {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double u01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }
}  // namespace

double dense_primal(const Vec& t_full, const ProblemSpec& spec) {
  const Index n = spec.n, m = spec.m;
  long double lin = 0.0L;
  std::vector<long double> rows(static_cast<std::size_t>(n), 0.0L);
  std::vector<long double> cols(static_cast<std::size_t>(m), 0.0L);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < m; ++j) {
      const double tij = t_full[static_cast<std::size_t>(i * m + j)];
      rows[static_cast<std::size_t>(i)] += tij;
      cols[static_cast<std::size_t>(j)] += tij;
      lin += static_cast<long double>(spec.c[static_cast<std::size_t>(i * m + j)]) * tij;
    }
  }
  long double div = 0.0L;
  if (spec.penalty == Penalty::L2) {
    for (Index i = 0; i < n; ++i) {
      const long double d = rows[static_cast<std::size_t>(i)] - spec.a[static_cast<std::size_t>(i)];
      div += 0.5L * d * d;
    }
    for (Index j = 0; j < m; ++j) {
      const long double d = cols[static_cast<std::size_t>(j)] - spec.b[static_cast<std::size_t>(j)];
      div += 0.5L * d * d;
    }
  } else if (spec.penalty == Penalty::KL) {
    auto term = [&](long double z, double y) -> long double {
      const long double ze = z + static_cast<long double>(spec.epsilon);
      if (y == 0.0) return ze > 0.0L ? kInf : 0.0L;
      return (ze > 0.0L ? ze * std::log(static_cast<double>(ze) / y) : 0.0L) - ze + y;
    };
    for (Index i = 0; i < n; ++i)
      div += term(rows[static_cast<std::size_t>(i)], spec.a[static_cast<std::size_t>(i)]);
    for (Index j = 0; j < m; ++j)
      div += term(cols[static_cast<std::size_t>(j)], spec.b[static_cast<std::size_t>(j)]);
  } else {
    for (Index i = 0; i < n; ++i)
      div += std::abs(static_cast<double>(rows[static_cast<std::size_t>(i)]) -
                      spec.a[static_cast<std::size_t>(i)]);
    for (Index j = 0; j < m; ++j)
      div += std::abs(static_cast<double>(cols[static_cast<std::size_t>(j)]) -
                      spec.b[static_cast<std::size_t>(j)]);
  }
  return static_cast<double>(static_cast<long double>(spec.lambda) * lin + div);
}

double dense_dual(const Vec& theta, const ProblemSpec& spec) {
  const Vec y = marginals(spec);
  long double s = 0.0L;
  if (spec.penalty == Penalty::L2) {
    for (std::size_t k = 0; k < y.size(); ++k)
      s += -0.5L * static_cast<long double>(theta[k]) * theta[k] +
           static_cast<long double>(y[k]) * theta[k];
  } else if (spec.penalty == Penalty::KL) {
    for (std::size_t k = 0; k < y.size(); ++k)
      s += -static_cast<long double>(y[k]) * std::exp(-theta[k]) + y[k] -
           static_cast<long double>(spec.epsilon) * theta[k];
  } else {
    for (std::size_t k = 0; k < y.size(); ++k) {
      if (std::abs(theta[k]) >= 1.0) return -kInf;
      s += static_cast<long double>(theta[k]) * y[k];
    }
  }
  return static_cast<double>(s);
}

namespace {

// Exact 1-D minimization of the KL objective along one transport coordinate.
// zi/zj are the row/column sums excluding this entry; v is the entry's new
// value. The gradient is increasing in v, so a safeguarded Newton iteration
// on a sign-changing bracket suffices.
double kl_coordinate_min(double zi, double zj, double lam_c, double eps,
                         double yi, double yj) {
  auto grad = [&](double v) {
    return lam_c + std::log((zi + v + eps) / yi) + std::log((zj + v + eps) / yj);
  };
  if (grad(0.0) >= 0.0) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (grad(hi) < 0.0) hi = hi * 2.0 + 1.0;
  double v = 0.5 * (lo + hi);
  for (int it = 0; it < 80; ++it) {
    const double g = grad(v);
    if (g > 0.0)
      hi = v;
    else
      lo = v;
    const double h = 1.0 / (zi + v + eps) + 1.0 / (zj + v + eps);
    double nv = v - g / h;
    if (!(nv > lo && nv < hi)) nv = 0.5 * (lo + hi);
    if (std::abs(nv - v) <= 1e-17 * (1.0 + std::abs(v))) {
      v = nv;
      break;
    }
    v = nv;
  }
  return v;
}

// Cyclic exact coordinate descent polish for KL; MM closes in quickly but its
// multiplicative tail is too slow for a 1e-12 certificate.
bool kl_cd_polish(Vec& t, const ProblemSpec& spec, const ScreeningState& state,
                  double gap_tol, int max_passes) {
  const Vec y = marginals(spec);
  Vec z = apply_X(t, state, spec.n, spec.m);
  for (int pass = 0; pass < max_passes; ++pass) {
    for (std::size_t k = 0; k < t.size(); ++k) {
      const Index p = state.active_to_original[k];
      const Index i = p / spec.m;
      const Index j = p % spec.m;
      const double t_new = kl_coordinate_min(
          z[static_cast<std::size_t>(i)] - t[k],
          z[static_cast<std::size_t>(spec.n + j)] - t[k],
          spec.lambda * spec.c[static_cast<std::size_t>(p)], spec.epsilon,
          y[static_cast<std::size_t>(i)], y[static_cast<std::size_t>(spec.n + j)]);
      const double delta = t_new - t[k];
      if (delta != 0.0) {
        t[k] = t_new;
        z[static_cast<std::size_t>(i)] += delta;
        z[static_cast<std::size_t>(spec.n + j)] += delta;
      }
    }
    if (pass % 100 == 99) z = apply_X(t, state, spec.n, spec.m);  // shed drift
    if (pass % 10 == 9) {
      const DualCertificate cert = dual_certificate(t, spec, state);
      if (cert.gap <= gap_tol) return true;
    }
  }
  return dual_certificate(t, spec, state).gap <= gap_tol;
}

// Working-set damped Newton for the KL primal: coordinate descent cannot move
// along transport cycles (marginal-preserving directions with near-zero cost),
// so degenerate optima need curvature-aware steps. The Hessian restricted to
// the working set is X^T Diag(1/(z+eps)) X plus a tiny ridge; cycle directions
// are Hessian-null, and the ridge lets the step run into the t >= 0 boundary
// where the offending entries leave the set.
bool kl_newton_polish(Vec& t, const ProblemSpec& spec, const ScreeningState& state,
                      double gap_tol, int rounds) {
  if (spec.epsilon <= 0.0) return false;
  const Vec y = marginals(spec);
  const Index n = spec.n, m = spec.m;

  auto solve_ws = [&](const std::vector<std::size_t>& ws, const Vec& z, const Vec& grad,
                      std::vector<double>& delta) {
    const std::size_t S = ws.size();
    std::vector<double> H(S * S, 0.0);
    delta.assign(S, 0.0);
    for (std::size_t a = 0; a < S; ++a) {
      const Index pa = state.active_to_original[ws[a]];
      const Index ia = pa / m, ja = pa % m;
      delta[a] = -grad[ws[a]];
      for (std::size_t b = 0; b < S; ++b) {
        const Index pb = state.active_to_original[ws[b]];
        double h = 0.0;
        if (pb / m == ia) h += 1.0 / (z[static_cast<std::size_t>(ia)] + spec.epsilon);
        if (pb % m == ja) h += 1.0 / (z[static_cast<std::size_t>(n + ja)] + spec.epsilon);
        H[a * S + b] = h;
      }
      H[a * S + a] += 1e-11;
    }
    for (std::size_t col = 0; col < S; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < S; ++r)
        if (std::abs(H[r * S + col]) > std::abs(H[piv * S + col])) piv = r;
      if (std::abs(H[piv * S + col]) < 1e-300) return false;
      if (piv != col) {
        for (std::size_t cc = 0; cc < S; ++cc) std::swap(H[col * S + cc], H[piv * S + cc]);
        std::swap(delta[col], delta[piv]);
      }
      for (std::size_t r = col + 1; r < S; ++r) {
        const double f = H[r * S + col] / H[col * S + col];
        if (f == 0.0) continue;
        for (std::size_t cc = col; cc < S; ++cc) H[r * S + cc] -= f * H[col * S + cc];
        delta[r] -= f * delta[col];
      }
    }
    for (std::size_t r = S; r-- > 0;) {
      for (std::size_t cc = r + 1; cc < S; ++cc) delta[r] -= H[r * S + cc] * delta[cc];
      delta[r] /= H[r * S + r];
    }
    return true;
  };

  for (int round = 0; round < rounds; ++round) {
    const Vec z = apply_X(t, state, n, m);
    std::vector<std::size_t> ws;
    Vec grad(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
      const Index p = state.active_to_original[k];
      const Index i = p / m, j = p % m;
      grad[k] = spec.lambda * spec.c[static_cast<std::size_t>(p)] +
                std::log((z[static_cast<std::size_t>(i)] + spec.epsilon) /
                         y[static_cast<std::size_t>(i)]) +
                std::log((z[static_cast<std::size_t>(n + j)] + spec.epsilon) /
                         y[static_cast<std::size_t>(n + j)]);
      if (t[k] > 1e-14 || grad[k] < -1e-12) ws.push_back(k);
    }
    if (ws.empty()) break;
    if (ws.size() > 400) return false;  // out of scope for a dense solve

    // two-metric refinement: boundary entries whose Newton component points
    // inward leave the working set
    std::vector<double> delta;
    bool solved = false;
    for (int refine = 0; refine < 6; ++refine) {
      if (!solve_ws(ws, z, grad, delta)) return false;
      std::vector<std::size_t> keep;
      for (std::size_t a = 0; a < ws.size(); ++a)
        if (!(t[ws[a]] <= 1e-14 && delta[a] < 0.0)) keep.push_back(ws[a]);
      if (keep.size() == ws.size()) {
        solved = true;
        break;
      }
      ws.swap(keep);
      if (ws.empty()) break;
    }
    if (!solved || ws.empty()) break;

    double gdot = 0.0;
    for (std::size_t a = 0; a < ws.size(); ++a) gdot += grad[ws[a]] * delta[a];
    if (gdot >= -1e-18) break;  // no descent left at this working set

    double alpha = 1.0;
    for (std::size_t a = 0; a < ws.size(); ++a)
      if (delta[a] < 0.0 && t[ws[a]] > 0.0) alpha = std::min(alpha, -t[ws[a]] / delta[a]);
    const double f0 = primal_objective(t, spec, state);
    Vec t_try(t);
    bool improved = false;
    while (alpha > 1e-14 && !improved) {
      for (std::size_t a = 0; a < ws.size(); ++a)
        t_try[ws[a]] = std::max(0.0, t[ws[a]] + alpha * delta[a]);
      if (primal_objective(t_try, spec, state) <= f0 + 1e-4 * alpha * gdot) {
        t = t_try;
        improved = true;
      } else {
        alpha *= 0.5;
      }
    }
    if (!improved) break;
    if (round % 4 == 3 && dual_certificate(t, spec, state).gap <= gap_tol) return true;
  }
  return dual_certificate(t, spec, state).gap <= gap_tol;
}

}  // namespace

Reference reference_solve(const ProblemSpec& spec) {
  if (spec.nm() > 2000)
    throw DomainError("reference_solve: instance too large for the oracle (nm > 2000)");
  SolverConfig cfg;
  cfg.kind = spec.penalty == Penalty::KL ? SolverKind::MM : SolverKind::Fista;
  cfg.method = ScreenMethod::None;
  cfg.gap_tol = 1e-12;
  cfg.max_iters = spec.penalty == Penalty::KL ? 100000 : 1000000;
  cfg.screen_period = 25;
  RunResult run = run_with_screening(spec, cfg);
  ScreeningState full = ScreeningState::full(spec.nm());
  if (!run.converged && spec.penalty == Penalty::KL) {
    // CD zeroes the multiplicative leftovers and handles separable descent;
    // Newton moves along the transport cycles CD cannot reach
    for (int stage = 0; stage < 5 && !run.converged; ++stage) {
      run.converged = kl_cd_polish(run.t, spec, full, 1e-12, 400);
      if (!run.converged) run.converged = kl_newton_polish(run.t, spec, full, 1e-12, 60);
    }
  }
  if (!run.converged)
    throw ConvergenceError("oracle unavailable: plain solve did not certify gap <= 1e-12");

  const DualCertificate cert = dual_certificate(run.t, spec, full);

  // Independent recomputation of the certificate.
  const double p_dense = dense_primal(run.t, spec);
  const double d_dense = dense_dual(cert.theta, spec);
  const double gap_dense = p_dense - d_dense;
  const double scale = std::max({1.0, std::abs(cert.primal), std::abs(cert.dual)});
  if (std::abs(gap_dense - cert.gap) > 1e-14 * scale)
    throw ConvergenceError("oracle self-consistency failure: dense and fast gap disagree");

  Reference ref;
  ref.t_hat = run.t;
  ref.theta_hat = cert.theta;
  ref.primal = cert.primal;
  ref.gap = cert.gap;
  return ref;
}

std::vector<Index> true_support(const Vec& t_hat, double tol) {
  std::vector<Index> support;
  for (std::size_t p = 0; p < t_hat.size(); ++p)
    if (t_hat[p] > tol) support.push_back(static_cast<Index>(p));
  return support;
}

namespace {

// Maximize g.u over ||u|| <= 1 with u in R^dim intersected with half-spaces
// {n_h.u <= e_h}. Dense sphere sampling plus shrinking local search; the
// extreme points of the feasible set lie on the sphere whenever the set is
// nonempty, so sampling directions suffices.
struct LowDimProblem {
  int dim = 0;
  std::array<double, 3> g{};
  std::vector<std::array<double, 3>> normals;
  std::vector<double> offsets;
};

double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

bool feasible(const LowDimProblem& prob, const std::array<double, 3>& u, double slack = 1e-12) {
  for (std::size_t h = 0; h < prob.normals.size(); ++h)
    if (dot3(prob.normals[h], u) > prob.offsets[h] + slack) return false;
  return true;
}

// Dykstra projection onto ball ∩ half-spaces (all projections are cheap).
std::array<double, 3> project_feasible(const LowDimProblem& prob, std::array<double, 3> x) {
  const std::size_t sets = 1 + prob.normals.size();
  std::vector<std::array<double, 3>> incr(sets, {0.0, 0.0, 0.0});
  for (int cycle = 0; cycle < 80; ++cycle) {
    for (std::size_t s = 0; s < sets; ++s) {
      std::array<double, 3> y{};
      for (int d = 0; d < 3; ++d) y[static_cast<std::size_t>(d)] = x[static_cast<std::size_t>(d)] + incr[s][static_cast<std::size_t>(d)];
      std::array<double, 3> px = y;
      if (s == 0) {
        const double nrm = std::sqrt(dot3(y, y));
        if (nrm > 1.0)
          for (double& v : px) v /= nrm;
      } else {
        const auto& nh = prob.normals[s - 1];
        const double nn = dot3(nh, nh);
        const double over = dot3(nh, y) - prob.offsets[s - 1];
        if (nn > 1e-300 && over > 0.0)
          for (int d = 0; d < 3; ++d) px[static_cast<std::size_t>(d)] -= over / nn * nh[static_cast<std::size_t>(d)];
      }
      for (int d = 0; d < 3; ++d) incr[s][static_cast<std::size_t>(d)] = y[static_cast<std::size_t>(d)] - px[static_cast<std::size_t>(d)];
      x = px;
    }
  }
  return x;
}

// Projected gradient ascent of a linear objective over the convex feasible
// set: globally convergent from any start; a direction sweep seeds it and a
// shrinking stepsize schedule polishes to ~1e-9.
double primal_max(const LowDimProblem& prob, std::mt19937_64& rng) {
  double best = -kInf;
  std::array<double, 3> best_u{};
  auto consider = [&](const std::array<double, 3>& u) {
    if (!feasible(prob, u, 1e-9)) return;
    const double v = dot3(prob.g, u);
    if (v > best) {
      best = v;
      best_u = u;
    }
  };
  auto consider_dir = [&](std::array<double, 3> u) {
    const double nrm = std::sqrt(dot3(u, u));
    if (nrm < 1e-14) return;
    for (double& x : u) x /= nrm;
    consider(u);
  };

  if (prob.dim == 1) {
    consider_dir({1.0, 0.0, 0.0});
    consider_dir({-1.0, 0.0, 0.0});
  } else if (prob.dim == 2) {
    for (int k = 0; k < 4000; ++k) {
      const double ang = 2.0 * M_PI * k / 4000;
      consider_dir({std::cos(ang), std::sin(ang), 0.0});
    }
  } else {
    const int N = 20000;
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < N; ++k) {
      const double z = 1.0 - 2.0 * (k + 0.5) / N;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double ang = golden * k;
      consider_dir({r * std::cos(ang), r * std::sin(ang), z});
    }
  }

  std::array<double, 3> starts[3];
  int nstarts = 0;
  if (std::isfinite(best)) starts[nstarts++] = best_u;
  starts[nstarts++] = project_feasible(prob, {0.0, 0.0, 0.0});
  {
    std::array<double, 3> r{};
    for (int d = 0; d < prob.dim; ++d) r[static_cast<std::size_t>(d)] = 2.0 * u01(rng) - 1.0;
    starts[nstarts++] = project_feasible(prob, r);
  }
  for (int s = 0; s < nstarts; ++s) {
    std::array<double, 3> z = starts[s];
    for (double step = 0.5; step > 1e-10; step *= 0.25) {
      for (int iter = 0; iter < 120; ++iter) {
        std::array<double, 3> cand = z;
        for (int d = 0; d < 3; ++d) cand[static_cast<std::size_t>(d)] += step * prob.g[static_cast<std::size_t>(d)];
        cand = project_feasible(prob, cand);
        if (dot3(prob.g, cand) <= dot3(prob.g, z) + 1e-16) break;
        z = cand;
      }
      consider(z);
    }
  }
  return best;
}

// min over multipliers >= 0 of sum mu_h e_h + ||g - sum mu_h n_h||: convex,
// solved by projected gradient with backtracking from several starts.
double dual_bound(const LowDimProblem& prob) {
  const std::size_t H = prob.normals.size();
  const double gnorm = std::sqrt(dot3(prob.g, prob.g));
  if (H == 0) return gnorm;
  auto phi = [&](double mu0, double mu1) {
    std::array<double, 3> r = prob.g;
    double lin = mu0 * prob.offsets[0];
    for (int d = 0; d < 3; ++d) r[static_cast<std::size_t>(d)] -= mu0 * prob.normals[0][static_cast<std::size_t>(d)];
    if (H > 1) {
      lin += mu1 * prob.offsets[1];
      for (int d = 0; d < 3; ++d) r[static_cast<std::size_t>(d)] -= mu1 * prob.normals[1][static_cast<std::size_t>(d)];
    }
    return lin + std::sqrt(dot3(r, r));
  };
  auto grad = [&](double mu0, double mu1, double& g0, double& g1) {
    std::array<double, 3> r = prob.g;
    for (int d = 0; d < 3; ++d) r[static_cast<std::size_t>(d)] -= mu0 * prob.normals[0][static_cast<std::size_t>(d)];
    if (H > 1)
      for (int d = 0; d < 3; ++d) r[static_cast<std::size_t>(d)] -= mu1 * prob.normals[1][static_cast<std::size_t>(d)];
    const double nrm = std::max(std::sqrt(dot3(r, r)), 1e-14);
    g0 = prob.offsets[0] - dot3(prob.normals[0], r) / nrm;
    g1 = H > 1 ? prob.offsets[1] - dot3(prob.normals[1], r) / nrm : 0.0;
  };

  double best = phi(0.0, 0.0);
  const double n0 = std::sqrt(dot3(prob.normals[0], prob.normals[0]));
  const double n1 = H > 1 ? std::sqrt(dot3(prob.normals[1], prob.normals[1])) : 1.0;
  const double scale0 = n0 > 1e-12 ? (gnorm + 1.0) / n0 : 0.0;
  const double scale1 = n1 > 1e-12 ? (gnorm + 1.0) / n1 : 0.0;
  for (int s = 0; s < 4; ++s) {
    double mu0 = (s & 1) ? scale0 : 0.0;
    double mu1 = (s & 2) ? scale1 : 0.0;
    double step = 0.5 * std::max({scale0, scale1, 1e-6});
    double cur = phi(mu0, mu1);
    for (int iter = 0; iter < 4000; ++iter) {
      double g0, g1;
      grad(mu0, mu1, g0, g1);
      double t0 = std::max(0.0, mu0 - step * g0);
      double t1 = H > 1 ? std::max(0.0, mu1 - step * g1) : 0.0;
      const double val = phi(t0, t1);
      if (val < cur) {
        mu0 = t0;
        mu1 = t1;
        cur = val;
        step *= 1.2;
      } else {
        step *= 0.5;
        if (step < 1e-14) break;
      }
    }
    best = std::min(best, cur);
  }
  return best;
}

}  // namespace

double brute_region_max(Index p, const Vec& center, const Vec& metric, double radius_sq,
                        std::span<const Halfspace> halfspaces, Index n, Index m) {
  if (n + m > 40) throw DomainError("brute_region_max: dimension too large for the oracle");
  const auto [i, j] = pair_index(p, n, m);
  const std::size_t i1 = static_cast<std::size_t>(i);
  const std::size_t i2 = static_cast<std::size_t>(n + j);
  const double center_sum = center[i1] + center[i2];
  if (radius_sq <= 0.0) return center_sum;

  const std::size_t dim = center.size();
  Vec invL(dim);
  for (std::size_t k = 0; k < dim; ++k) invL[k] = radius_sq / metric[k];

  // whitened objective and half-space normals
  Vec ghat(dim, 0.0);
  ghat[i1] = std::sqrt(invL[i1]);
  ghat[i2] = std::sqrt(invL[i2]);
  std::vector<Vec> nhat;
  std::vector<double> eoff;
  for (const Halfspace& h : halfspaces) {
    Vec v(dim);
    double nn = 0.0, e = h.offset;
    for (std::size_t k = 0; k < dim; ++k) {
      v[k] = h.normal[k] * std::sqrt(invL[k]);
      nn += v[k] * v[k];
      e -= h.normal[k] * center[k];
    }
    if (nn <= 1e-300) continue;  // trivial half-space
    nhat.push_back(std::move(v));
    eoff.push_back(e);
  }

  // orthonormal basis of span{ghat, nhat...} (<= 3 dims)
  std::vector<Vec> basis;
  auto add_dir = [&](const Vec& v) {
    Vec r(v);
    for (const Vec& b : basis) {
      double d = 0.0;
      for (std::size_t k = 0; k < dim; ++k) d += r[k] * b[k];
      for (std::size_t k = 0; k < dim; ++k) r[k] -= d * b[k];
    }
    double nn = 0.0;
    for (double x : r) nn += x * x;
    if (nn > 1e-20) {
      const double inv = 1.0 / std::sqrt(nn);
      for (double& x : r) x *= inv;
      basis.push_back(std::move(r));
    }
  };
  add_dir(ghat);
  for (const Vec& v : nhat) add_dir(v);

  LowDimProblem prob;
  prob.dim = static_cast<int>(basis.size());
  auto project = [&](const Vec& v) {
    std::array<double, 3> out{0.0, 0.0, 0.0};
    for (std::size_t b = 0; b < basis.size(); ++b) {
      double d = 0.0;
      for (std::size_t k = 0; k < dim; ++k) d += v[k] * basis[b][k];
      out[b] = d;
    }
    return out;
  };
  prob.g = project(ghat);
  for (std::size_t h = 0; h < nhat.size(); ++h) {
    prob.normals.push_back(project(nhat[h]));
    prob.offsets.push_back(eoff[h]);
  }

  std::mt19937_64 rng(0x5eedULL + static_cast<std::uint64_t>(p));
  const double primal = primal_max(prob, rng);
  const double dual = dual_bound(prob);
  if (!std::isfinite(primal)) {
    // no feasible point found; the safe sets in use always intersect, so
    // treat as oracle failure rather than returning something unverified
    throw ConvergenceError("brute_region_max: no feasible sample");
  }
  if (dual - primal > 1e-6 * (1.0 + std::abs(dual)))
    throw ConvergenceError("brute_region_max: primal/dual sandwich failed");
  return center_sum + primal;
}

double brute_region_max(Index p, const BallRegion& ball,
                        std::span<const Halfspace> halfspaces, Index n, Index m) {
  const Vec ones(ball.center.size(), 1.0);
  return brute_region_max(p, ball.center, ones, ball.radius * ball.radius, halfspaces, n, m);
}

double brute_region_max(Index p, const EllipseRegion& ellipse,
                        std::span<const Halfspace> halfspaces, Index n, Index m) {
  return brute_region_max(p, ellipse.center, ellipse.metric, ellipse.radius_sq, halfspaces, n, m);
}

std::vector<Index> lp_vertex_support(const ProblemSpec& spec) {
  const Index n = spec.n, m = spec.m;
  if (n > 4 || m > 4) throw DomainError("lp_vertex_support: only n, m <= 4");
  double mass_a = 0.0, mass_b = 0.0;
  for (double v : spec.a) mass_a += v;
  for (double v : spec.b) mass_b += v;
  if (std::abs(mass_a - mass_b) > 1e-9 * std::max(1.0, mass_a))
    throw DomainError("lp_vertex_support: requires balanced marginals");

  const Index nm = n * m;
  const Index nbasis = n + m - 1;
  std::vector<Index> comb(static_cast<std::size_t>(nbasis));
  std::vector<Index> best_support;
  double best_cost = kInf;

  // iterate over all (n+m-1)-subsets of the nm cells
  std::vector<int> pick(static_cast<std::size_t>(nm), 0);
  std::fill(pick.begin(), pick.begin() + nbasis, 1);
  std::sort(pick.begin(), pick.end());
  do {
    Index kidx = 0;
    for (Index p = 0; p < nm; ++p)
      if (pick[static_cast<std::size_t>(p)]) comb[static_cast<std::size_t>(kidx++)] = p;

    // solve rows/cols equality system restricted to the subset (drop the last
    // redundant equation)
    const Index rows = n + m - 1;
    std::vector<double> A(static_cast<std::size_t>(rows * nbasis), 0.0);
    std::vector<double> rhs(static_cast<std::size_t>(rows), 0.0);
    for (Index r = 0; r < n; ++r) rhs[static_cast<std::size_t>(r)] = spec.a[static_cast<std::size_t>(r)];
    for (Index cidx = 0; cidx + 1 < m; ++cidx)
      rhs[static_cast<std::size_t>(n + cidx)] = spec.b[static_cast<std::size_t>(cidx)];
    for (Index kk = 0; kk < nbasis; ++kk) {
      const Index p = comb[static_cast<std::size_t>(kk)];
      const Index i = p / m;
      const Index j = p % m;
      A[static_cast<std::size_t>(i * nbasis + kk)] = 1.0;
      if (j + 1 < m) A[static_cast<std::size_t>((n + j) * nbasis + kk)] = 1.0;
    }
    // Gaussian elimination with partial pivoting
    std::vector<double> M(A);
    std::vector<double> x(rhs);
    bool singular = false;
    for (Index col = 0; col < nbasis && !singular; ++col) {
      Index piv = -1;
      double pv = 1e-10;
      for (Index r = col; r < rows; ++r) {
        const double v = std::abs(M[static_cast<std::size_t>(r * nbasis + col)]);
        if (v > pv) {
          pv = v;
          piv = r;
        }
      }
      if (piv < 0) {
        singular = true;
        break;
      }
      for (Index cc = 0; cc < nbasis; ++cc)
        std::swap(M[static_cast<std::size_t>(col * nbasis + cc)], M[static_cast<std::size_t>(piv * nbasis + cc)]);
      std::swap(x[static_cast<std::size_t>(col)], x[static_cast<std::size_t>(piv)]);
      for (Index r = 0; r < rows; ++r) {
        if (r == col) continue;
        const double f = M[static_cast<std::size_t>(r * nbasis + col)] / M[static_cast<std::size_t>(col * nbasis + col)];
        if (f == 0.0) continue;
        for (Index cc = 0; cc < nbasis; ++cc)
          M[static_cast<std::size_t>(r * nbasis + cc)] -= f * M[static_cast<std::size_t>(col * nbasis + cc)];
        x[static_cast<std::size_t>(r)] -= f * x[static_cast<std::size_t>(col)];
      }
    }
    if (singular) continue;
    // consistency of the dropped rows and nonnegativity
    bool ok = true;
    Vec t(static_cast<std::size_t>(nbasis));
    for (Index kk = 0; kk < nbasis && ok; ++kk) {
      t[static_cast<std::size_t>(kk)] = x[static_cast<std::size_t>(kk)] / M[static_cast<std::size_t>(kk * nbasis + kk)];
      if (t[static_cast<std::size_t>(kk)] < -1e-9) ok = false;
    }
    if (!ok) continue;
    // check last column equation
    double last_col = 0.0, cost = 0.0;
    for (Index kk = 0; kk < nbasis; ++kk) {
      const Index p = comb[static_cast<std::size_t>(kk)];
      if (p % m == m - 1) last_col += t[static_cast<std::size_t>(kk)];
      cost += spec.c[static_cast<std::size_t>(p)] * t[static_cast<std::size_t>(kk)];
    }
    if (std::abs(last_col - spec.b[static_cast<std::size_t>(m - 1)]) > 1e-8) continue;
    if (cost < best_cost - 1e-12) {
      best_cost = cost;
      best_support.clear();
      for (Index kk = 0; kk < nbasis; ++kk)
        if (t[static_cast<std::size_t>(kk)] > 1e-9) best_support.push_back(comb[static_cast<std::size_t>(kk)]);
    }
  } while (std::next_permutation(pick.begin(), pick.end()));

  if (!std::isfinite(best_cost))
    throw ConvergenceError("lp_vertex_support: no feasible basis found");
  std::sort(best_support.begin(), best_support.end());
  return best_support;
}

}  // namespace oracle
}  // namespace uot
