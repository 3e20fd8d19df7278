#include "uot/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uot {

Vec residuals_rescale(const Vec& theta, const ProblemSpec& spec,
                      const ScreeningState& state) {
  double worst_ratio = 1.0;
  for (Index p : state.active_to_original) {
    const Index i = p / spec.m;
    const Index j = p % spec.m;
    const double num = theta[static_cast<std::size_t>(i)] +
                       theta[static_cast<std::size_t>(spec.n + j)];
    const double den = spec.lambda * spec.c[static_cast<std::size_t>(p)];
    if (den <= 0.0) {
      if (num > 0.0)
        throw DegenerateError("residuals_rescale: c_p = 0 with violated constraint");
      continue;
    }
    worst_ratio = std::max(worst_ratio, num / den);
  }
  Vec out(theta);
  for (double& x : out) x /= worst_ratio;
  return out;
}

Vec shifting_projection(const Vec& theta, const ProblemSpec& spec,
                        const ScreeningState& state) {
  const Index n = spec.n;
  const Index m = spec.m;
  // Worst half-slack per row and per column; coordinates whose constraints
  // were all deleted keep a zero shift.
  Vec row_shift(static_cast<std::size_t>(n), 0.0);
  Vec col_shift(static_cast<std::size_t>(m), 0.0);
  Vec row_worst(static_cast<std::size_t>(n), -std::numeric_limits<double>::infinity());
  Vec col_worst(static_cast<std::size_t>(m), -std::numeric_limits<double>::infinity());
  for (Index p : state.active_to_original) {
    const Index i = p / m;
    const Index j = p % m;
    const double half_slack = 0.5 * (theta[static_cast<std::size_t>(i)] +
                                     theta[static_cast<std::size_t>(n + j)] -
                                     spec.lambda * spec.c[static_cast<std::size_t>(p)]);
    row_worst[static_cast<std::size_t>(i)] = std::max(row_worst[static_cast<std::size_t>(i)], half_slack);
    col_worst[static_cast<std::size_t>(j)] = std::max(col_worst[static_cast<std::size_t>(j)], half_slack);
  }
  for (Index i = 0; i < n; ++i)
    if (std::isfinite(row_worst[static_cast<std::size_t>(i)]))
      row_shift[static_cast<std::size_t>(i)] = row_worst[static_cast<std::size_t>(i)];
  for (Index j = 0; j < m; ++j)
    if (std::isfinite(col_worst[static_cast<std::size_t>(j)]))
      col_shift[static_cast<std::size_t>(j)] = col_worst[static_cast<std::size_t>(j)];

  Vec out(theta.size());
  for (Index i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = theta[static_cast<std::size_t>(i)] - row_shift[static_cast<std::size_t>(i)];
  for (Index j = 0; j < m; ++j)
    out[static_cast<std::size_t>(n + j)] =
        theta[static_cast<std::size_t>(n + j)] - col_shift[static_cast<std::size_t>(j)];
  return out;
}

}  // namespace uot
