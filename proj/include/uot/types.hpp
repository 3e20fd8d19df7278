#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uot/errors.hpp"

namespace uot {

using Vec = std::vector<double>;
using Index = std::int64_t;

enum class Penalty { L2, KL, TV };

Penalty penalty_from_string(const std::string& s);
std::string to_string(Penalty p);

// Transport plan convention: T is n x m, a in R^n are row sums, b in R^m are
// column sums, y = [a; b], t = vec(T) row-major. The index operator X stacks
// the row-sum operator (n rows) over the column-sum operator (m rows); it is
// never materialized.
struct ProblemSpec {
  Index n = 0;
  Index m = 0;
  Vec a;       // length n
  Vec b;       // length m
  Vec c;       // length n*m, row-major, nonnegative
  double lambda = 1.0;
  Penalty penalty = Penalty::L2;
  double epsilon = 0.0;  // KL shift, requires 0 <= epsilon < min_j y_j

  Index nm() const { return n * m; }
  // Throws DimensionError/DomainError if any invariant fails.
  void validate() const;
};

// y = [a; b], length n+m.
Vec marginals(const ProblemSpec& spec);

inline Index flat_index(Index i, Index j, Index /*n*/, Index m) { return i * m + j; }

struct RowCol {
  Index i;
  Index j;
};

inline RowCol pair_index(Index p, Index n, Index m) {
  if (p < 0 || p >= n * m) throw DimensionError("pair_index: flat index out of range");
  return RowCol{p / m, p % m};
}

// Permanent screening mask over the nm transport entries. Once an entry is
// screened it never becomes active again; compacted vectors are addressed
// through active_to_original.
struct ScreeningState {
  std::vector<std::uint8_t> mask;  // length nm, 1 = active
  std::vector<Index> active_to_original;
  Index screened_count = 0;

  static ScreeningState full(Index nm);
  Index active_count() const { return static_cast<Index>(active_to_original.size()); }
  bool is_active(Index p) const { return mask[static_cast<std::size_t>(p)] != 0; }
};

struct IterateTrace {
  Index iter = 0;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  Index screened = 0;
  std::int64_t elapsed_ns = 0;
};

}  // namespace uot
