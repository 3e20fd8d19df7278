#include "uot/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uot/core.hpp"

namespace uot {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

PenaltyModel make_penalty_model(const ProblemSpec& spec) {
  return PenaltyModel{spec.penalty, marginals(spec), spec.epsilon};
}

double exp_neg_clamped(double x, bool* clamped) {
  if (x > 700.0 || x < -700.0) {
    if (clamped) *clamped = true;
    x = std::clamp(x, -700.0, 700.0);
  }
  return std::exp(-x);
}

double divergence(const Vec& z, const PenaltyModel& model) {
  if (z.size() != model.y.size()) throw DimensionError("divergence: length mismatch");
  switch (model.kind) {
    case Penalty::L2: {
      double s = 0.0;
      for (std::size_t j = 0; j < z.size(); ++j) {
        const double d = z[j] - model.y[j];
        s += 0.5 * d * d;
      }
      return s;
    }
    case Penalty::KL: {
      double s = 0.0;
      for (std::size_t j = 0; j < z.size(); ++j) {
        if (z[j] < 0.0) throw DomainError("divergence: negative marginal sum under KL");
        const double ze = z[j] + model.epsilon;
        const double y = model.y[j];
        if (y == 0.0) {
          if (ze > 0.0) return kInf;
          continue;  // 0 ln(0/0) treated as 0
        }
        // 0 ln 0 := 0
        const double lin = -ze + y;
        s += (ze > 0.0 ? ze * std::log(ze / y) : 0.0) + lin;
      }
      return s;
    }
    case Penalty::TV: {
      double s = 0.0;
      for (std::size_t j = 0; j < z.size(); ++j) s += std::abs(z[j] - model.y[j]);
      return s;
    }
  }
  throw DomainError("divergence: bad penalty");
}

double dual_value(const Vec& theta, const PenaltyModel& model, bool* clamped) {
  if (theta.size() != model.y.size()) throw DimensionError("dual_value: length mismatch");
  switch (model.kind) {
    case Penalty::L2: {
      double s = 0.0;
      for (std::size_t j = 0; j < theta.size(); ++j)
        s += -0.5 * theta[j] * theta[j] + model.y[j] * theta[j];
      return s;
    }
    case Penalty::KL: {
      double s = 0.0;
      for (std::size_t j = 0; j < theta.size(); ++j) {
        s += -model.y[j] * exp_neg_clamped(theta[j], clamped) + model.y[j] -
             model.epsilon * theta[j];
      }
      return s;
    }
    case Penalty::TV: {
      double s = 0.0;
      for (std::size_t j = 0; j < theta.size(); ++j) {
        if (std::abs(theta[j]) >= 1.0) return -kInf;
        s += theta[j] * model.y[j];
      }
      return s;
    }
  }
  throw DomainError("dual_value: bad penalty");
}

Vec dual_gradient(const Vec& theta, const PenaltyModel& model) {
  Vec g(theta.size());
  switch (model.kind) {
    case Penalty::L2:
      for (std::size_t j = 0; j < theta.size(); ++j) g[j] = model.y[j] - theta[j];
      return g;
    case Penalty::KL:
      for (std::size_t j = 0; j < theta.size(); ++j)
        g[j] = model.y[j] * exp_neg_clamped(theta[j]) - model.epsilon;
      return g;
    case Penalty::TV:
      for (std::size_t j = 0; j < theta.size(); ++j) g[j] = model.y[j];
      return g;
  }
  throw DomainError("dual_gradient: bad penalty");
}

Vec hessian_diag(const Vec& theta, const PenaltyModel& model) {
  Vec h(theta.size());
  switch (model.kind) {
    case Penalty::L2:
      std::fill(h.begin(), h.end(), -1.0);
      return h;
    case Penalty::KL:
      for (std::size_t j = 0; j < theta.size(); ++j)
        h[j] = -model.y[j] * exp_neg_clamped(theta[j]);
      return h;
    case Penalty::TV:
      std::fill(h.begin(), h.end(), 0.0);
      return h;
  }
  throw DomainError("hessian_diag: bad penalty");
}

Vec dual_from_primal(std::span<const double> t_active, const ProblemSpec& spec,
                     const ScreeningState& state, bool* degenerate) {
  const Vec z = apply_X(t_active, state, spec.n, spec.m);
  const Vec y = marginals(spec);
  Vec theta(y.size());
  switch (spec.penalty) {
    case Penalty::L2:
      for (std::size_t j = 0; j < y.size(); ++j) theta[j] = y[j] - z[j];
      return theta;
    case Penalty::KL:
      for (std::size_t j = 0; j < y.size(); ++j) {
        if (y[j] == 0.0) {
          if (degenerate) *degenerate = true;
          theta[j] = -kInf;
          continue;
        }
        theta[j] = std::log(y[j]) - std::log(std::max(z[j] + spec.epsilon, 1e-300));
      }
      return theta;
    case Penalty::TV:
      throw UnsupportedError("dual_from_primal: TV has no smooth primal-dual link");
  }
  throw DomainError("dual_from_primal: bad penalty");
}

}  // namespace uot
