#include "uot/types.hpp"

#include <cmath>
#include <limits>

namespace uot {

Penalty penalty_from_string(const std::string& s) {
  if (s == "l2") return Penalty::L2;
  if (s == "kl") return Penalty::KL;
  if (s == "tv") return Penalty::TV;
  throw ParseError("unknown penalty '" + s + "' (expected l2|kl|tv)");
}

std::string to_string(Penalty p) {
  switch (p) {
    case Penalty::L2: return "l2";
    case Penalty::KL: return "kl";
    case Penalty::TV: return "tv";
  }
  return "?";
}

void ProblemSpec::validate() const {
  if (n <= 0 || m <= 0) throw DimensionError("ProblemSpec: n and m must be positive");
  if (static_cast<Index>(a.size()) != n) throw DimensionError("ProblemSpec: len(a) != n");
  if (static_cast<Index>(b.size()) != m) throw DimensionError("ProblemSpec: len(b) != m");
  if (static_cast<Index>(c.size()) != n * m) throw DimensionError("ProblemSpec: len(c) != n*m");
  auto check_nonneg = [](const Vec& v, const char* name) {
    for (double x : v) {
      if (!std::isfinite(x) || x < 0.0)
        throw DomainError(std::string("ProblemSpec: ") + name + " entries must be finite and >= 0");
    }
  };
  check_nonneg(a, "a");
  check_nonneg(b, "b");
  check_nonneg(c, "c");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw DomainError("ProblemSpec: lambda must be positive");
  if (penalty == Penalty::KL) {
    double ymin = std::numeric_limits<double>::infinity();
    for (double x : a) ymin = std::min(ymin, x);
    for (double x : b) ymin = std::min(ymin, x);
    if (!(epsilon >= 0.0) || !(epsilon < ymin))
      throw DomainError("ProblemSpec: KL requires 0 <= epsilon < min_j y_j");
  } else if (epsilon < 0.0 || !std::isfinite(epsilon)) {
    throw DomainError("ProblemSpec: epsilon must be finite and >= 0");
  }
}

Vec marginals(const ProblemSpec& spec) {
  Vec y(static_cast<std::size_t>(spec.n + spec.m));
  for (Index i = 0; i < spec.n; ++i) y[static_cast<std::size_t>(i)] = spec.a[static_cast<std::size_t>(i)];
  for (Index j = 0; j < spec.m; ++j) y[static_cast<std::size_t>(spec.n + j)] = spec.b[static_cast<std::size_t>(j)];
  return y;
}

ScreeningState ScreeningState::full(Index nm) {
  ScreeningState s;
  s.mask.assign(static_cast<std::size_t>(nm), 1);
  s.active_to_original.resize(static_cast<std::size_t>(nm));
  for (Index p = 0; p < nm; ++p) s.active_to_original[static_cast<std::size_t>(p)] = p;
  s.screened_count = 0;
  return s;
}

}  // namespace uot
