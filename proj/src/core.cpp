#include "uot/core.hpp"

#include <algorithm>
#include <cmath>

#include "uot/penalty.hpp"

namespace uot {

Vec apply_X(std::span<const double> t_active, const ScreeningState& state,
            Index n, Index m) {
  if (t_active.size() != state.active_to_original.size())
    throw DimensionError("apply_X: transport length does not match active count");
  Vec out(static_cast<std::size_t>(n + m), 0.0);
  for (std::size_t k = 0; k < t_active.size(); ++k) {
    const Index p = state.active_to_original[k];
    const Index i = p / m;
    const Index j = p % m;
    out[static_cast<std::size_t>(i)] += t_active[k];
    out[static_cast<std::size_t>(n + j)] += t_active[k];
  }
  return out;
}

Vec apply_X_transpose(const Vec& theta, const ScreeningState& state,
                      Index n, Index m) {
  if (static_cast<Index>(theta.size()) != n + m)
    throw DimensionError("apply_X_transpose: theta length != n+m");
  Vec out(state.active_to_original.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Index p = state.active_to_original[k];
    const Index i = p / m;
    const Index j = p % m;
    out[k] = theta[static_cast<std::size_t>(i)] + theta[static_cast<std::size_t>(n + j)];
  }
  return out;
}

double primal_objective(std::span<const double> t_active, const ProblemSpec& spec,
                        const ScreeningState& state) {
  // Kahan-compensated: this sum runs over up to nm terms and feeds gap
  // certificates that are cross-checked to 1e-14.
  double linear = 0.0, comp = 0.0;
  for (std::size_t k = 0; k < t_active.size(); ++k) {
    const double tk = t_active[k];
    if (std::isnan(tk)) throw DomainError("primal_objective: NaN in transport vector");
    const double term = spec.c[static_cast<std::size_t>(state.active_to_original[k])] * tk - comp;
    const double next = linear + term;
    comp = (next - linear) - term;
    linear = next;
  }
  const Vec z = apply_X(t_active, state, spec.n, spec.m);
  const PenaltyModel model = make_penalty_model(spec);
  return spec.lambda * linear + divergence(z, model);
}

double max_constraint_violation(const Vec& theta, const ProblemSpec& spec,
                                const ScreeningState& state) {
  double worst = -std::numeric_limits<double>::infinity();
  for (Index p : state.active_to_original) {
    const Index i = p / spec.m;
    const Index j = p % spec.m;
    const double slack = theta[static_cast<std::size_t>(i)] +
                         theta[static_cast<std::size_t>(spec.n + j)] -
                         spec.lambda * spec.c[static_cast<std::size_t>(p)];
    worst = std::max(worst, slack);
  }
  return worst;
}

bool is_dual_feasible(const Vec& theta, const ProblemSpec& spec,
                      const ScreeningState& state, double tol) {
  return max_constraint_violation(theta, spec, state) <= tol;
}

double duality_gap(std::span<const double> t_active, const Vec& theta,
                   const ProblemSpec& spec, const ScreeningState& state) {
  if (!is_dual_feasible(theta, spec, state))
    throw ContractError("duality_gap: dual point violates a constraint beyond 1e-9");
  const PenaltyModel model = make_penalty_model(spec);
  return primal_objective(t_active, spec, state) - dual_value(theta, model);
}

void compact_vectors(ScreeningState& state, const std::vector<Index>& newly_screened,
                     const std::vector<Vec*>& vectors) {
  if (newly_screened.empty()) return;
  for (Vec* v : vectors)
    if (v->size() != state.active_to_original.size())
      throw DimensionError("compact: vector length does not match active count");
  for (Index p : newly_screened) {
    if (p < 0 || p >= static_cast<Index>(state.mask.size()))
      throw DimensionError("compact: index out of range");
    if (!state.is_active(p))
      throw ContractError("compact: index already screened");
    state.mask[static_cast<std::size_t>(p)] = 0;
  }
  std::size_t keep = 0;
  for (std::size_t k = 0; k < state.active_to_original.size(); ++k) {
    const Index p = state.active_to_original[k];
    if (state.is_active(p)) {
      state.active_to_original[keep] = p;
      for (Vec* v : vectors) (*v)[keep] = (*v)[k];
      ++keep;
    }
  }
  state.active_to_original.resize(keep);
  for (Vec* v : vectors) v->resize(keep);
  state.screened_count += static_cast<Index>(newly_screened.size());
}

void compact(ScreeningState& state, const std::vector<Index>& newly_screened,
             Vec& t, Vec& c) {
  compact_vectors(state, newly_screened, std::vector<Vec*>{&t, &c});
}

Vec inflate(std::span<const double> t_active, const ScreeningState& state) {
  Vec full(state.mask.size(), 0.0);
  for (std::size_t k = 0; k < t_active.size(); ++k)
    full[static_cast<std::size_t>(state.active_to_original[k])] = t_active[k];
  return full;
}

}  // namespace uot
