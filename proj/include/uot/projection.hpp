#pragma once

#include "uot/types.hpp"

namespace uot {

// theta / max(1, max_p (X^T theta)_p / (lambda c_p)) over active entries.
// Active entries with c_p = 0 are skipped when (X^T theta)_p <= 0 (scaling
// cannot violate them); c_p = 0 with a positive numerator throws
// DegenerateError.
Vec residuals_rescale(const Vec& theta, const ProblemSpec& spec,
                      const ScreeningState& state);

// Shifting projection: every row coordinate moves down by half the worst
// slack in its row, every column coordinate by half the worst slack in its
// column (slacks over active entries). The shift is applied unconditionally,
// so strictly feasible inputs move too; the output satisfies every active
// constraint. O(active) time.
Vec shifting_projection(const Vec& theta, const ProblemSpec& spec,
                        const ScreeningState& state);

}  // namespace uot
