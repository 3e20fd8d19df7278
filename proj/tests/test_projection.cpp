#include <doctest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "uot/core.hpp"
#include "uot/projection.hpp"

using namespace uot;

TEST_CASE("residuals rescaling") {
  ProblemSpec spec = testutil::hand_instance();  // lambda c = 2
  ScreeningState st = ScreeningState::full(1);

  // already feasible: unchanged
  Vec theta{0.5, 0.5};
  Vec out = residuals_rescale(theta, spec, st);
  CHECK(out[0] == 0.5);
  CHECK(out[1] == 0.5);

  // ratio (2+2)/2 = 2 rescales onto the boundary
  Vec viol{2.0, 2.0};
  out = residuals_rescale(viol, spec, st);
  CHECK(out[0] == doctest::Approx(1.0));
  CHECK(out[1] == doctest::Approx(1.0));
  CHECK(out[0] + out[1] <= 2.0 + 1e-15);

  // c = 0 with violated constraint degenerates
  ProblemSpec zero_c = spec;
  zero_c.c = {0.0};
  CHECK_THROWS_AS(residuals_rescale(viol, zero_c, st), DegenerateError);

  // c = 0 with a nonpositive numerator is skipped
  Vec ok{-1.0, 0.5};
  out = residuals_rescale(ok, zero_c, st);
  CHECK(out[0] == -1.0);
}

TEST_CASE("shifting projection hand values") {
  ProblemSpec spec = testutil::hand_instance();
  spec.c = {1.0};  // lambda c = 1
  ScreeningState st = ScreeningState::full(1);
  Vec theta{1.0, 1.0};
  Vec out = shifting_projection(theta, spec, st);
  CHECK(out[0] == doctest::Approx(0.5));
  CHECK(out[1] == doctest::Approx(0.5));
  CHECK(out[0] + out[1] - 1.0 == doctest::Approx(0.0));  // slack exactly 0

  // every constraint exactly tight: unchanged
  Vec tight{0.5, 0.5};
  out = shifting_projection(tight, spec, st);
  CHECK(out[0] == 0.5);
  CHECK(out[1] == 0.5);
}

TEST_CASE("shifting projection moves strictly feasible points") {
  ProblemSpec spec = testutil::hand_instance();  // lambda c = 2
  ScreeningState st = ScreeningState::full(1);
  Vec theta{0.0, 0.0};  // slack -2, shift -1 on both blocks
  Vec out = shifting_projection(theta, spec, st);
  CHECK(out[0] == doctest::Approx(1.0));
  CHECK(out[1] == doctest::Approx(1.0));
}

TEST_CASE("shifting projection output is always feasible") {
  std::mt19937_64 g(31);
  for (int trial = 0; trial < 2000; ++trial) {
    const Index n = 1 + static_cast<Index>(g() % 64);
    const Index m = 1 + static_cast<Index>(g() % 64);
    ProblemSpec spec;
    spec.n = n;
    spec.m = m;
    spec.a.assign(static_cast<std::size_t>(n), 1.0);
    spec.b.assign(static_cast<std::size_t>(m), 1.0);
    spec.c.resize(static_cast<std::size_t>(n * m));
    for (double& v : spec.c) v = testutil::u01(g);
    spec.lambda = std::exp(testutil::uniform(g, -3, 1));
    ScreeningState st = ScreeningState::full(n * m);
    Vec theta(static_cast<std::size_t>(n + m));
    for (double& v : theta) v = testutil::uniform(g, -3, 3);
    const Vec out = shifting_projection(theta, spec, st);
    CHECK(max_constraint_violation(out, spec, st) <= 1e-12);
  }
}

TEST_CASE("2x2 shifting projection satisfies all four constraints") {
  std::mt19937_64 g(32);
  for (int trial = 0; trial < 50; ++trial) {
    ProblemSpec spec = testutil::random_instance(g, 2, 2, std::exp(testutil::uniform(g, -2, 0)),
                                                 Penalty::L2);
    ScreeningState st = ScreeningState::full(4);
    Vec theta(4);
    for (double& v : theta) v = testutil::uniform(g, -2, 2);
    const Vec out = shifting_projection(theta, spec, st);
    for (Index p = 0; p < 4; ++p) {
      const Index i = p / 2, j = p % 2;
      CHECK(out[static_cast<std::size_t>(i)] + out[static_cast<std::size_t>(2 + j)] <=
            spec.lambda * spec.c[static_cast<std::size_t>(p)] + 1e-12);
    }
  }
}

TEST_CASE("projection respects deleted constraints only") {
  // screening removes an entry; the projection may violate the deleted
  // constraint but must satisfy every active one
  ProblemSpec spec;
  spec.n = 1;
  spec.m = 2;
  spec.a = {1.0};
  spec.b = {1.0, 1.0};
  spec.c = {0.1, 5.0};
  spec.lambda = 1.0;
  ScreeningState st = ScreeningState::full(2);
  Vec t{0.0, 0.0}, c(spec.c);
  compact(st, {0}, t, c);  // delete the tight, cheap constraint
  Vec theta{3.0, 3.0, 1.0};
  const Vec out = shifting_projection(theta, spec, st);
  CHECK(max_constraint_violation(out, spec, st) <= 1e-12);
  // the deleted pair (0,0) may stay violated
  CHECK(out[0] + out[1] > spec.lambda * 0.1);
}
