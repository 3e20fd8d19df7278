#include <doctest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "uot/core.hpp"
#include "uot/oracle.hpp"
#include "uot/penalty.hpp"
#include "uot/solvers.hpp"

using namespace uot;

TEST_CASE("reference solve on the hand instance") {
  const ProblemSpec spec = testutil::hand_instance();
  const oracle::Reference ref = oracle::reference_solve(spec);
  CHECK(ref.t_hat[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(ref.primal == doctest::Approx(1.0));
  CHECK(ref.gap <= 1e-12);
}

TEST_CASE("reference solve rejects oversized instances") {
  ProblemSpec spec;
  spec.n = 50;
  spec.m = 50;
  spec.a.assign(50, 1.0);
  spec.b.assign(50, 1.0);
  spec.c.assign(2500, 1.0);
  spec.lambda = 1.0;
  CHECK_THROWS_AS(oracle::reference_solve(spec), DomainError);
}

TEST_CASE("marginal residual shrinks as lambda -> 0") {
  std::mt19937_64 g(71);
  ProblemSpec spec = testutil::random_instance(g, 6, 6, 1.0, Penalty::L2);
  double prev_residual = 1e300;
  for (double lambda : {1.0, 1e-1, 1e-2, 1e-3}) {
    spec.lambda = lambda;
    const oracle::Reference ref = oracle::reference_solve(spec);
    ScreeningState full = ScreeningState::full(spec.nm());
    const Vec z = apply_X(ref.t_hat, full, spec.n, spec.m);
    const Vec y = marginals(spec);
    double resid = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k)
      resid += (z[k] - y[k]) * (z[k] - y[k]);
    resid = std::sqrt(resid);
    CHECK(resid <= prev_residual + 1e-12);
    prev_residual = resid;
  }
  CHECK(prev_residual <= 1e-2);
}

TEST_CASE("optimal supports are sparse") {
  std::mt19937_64 g(72);
  for (int trial = 0; trial < 10; ++trial) {
    const Penalty pen = trial % 2 ? Penalty::KL : Penalty::L2;
    const Index n = 4 + static_cast<Index>(g() % 6);
    const Index m = 4 + static_cast<Index>(g() % 6);
    ProblemSpec spec = testutil::random_instance(g, n, m, 0.1, pen);
    const oracle::Reference ref = oracle::reference_solve(spec);
    const auto support = oracle::true_support(ref.t_hat);
    CHECK(static_cast<Index>(support.size()) <= n + m + 1);
  }
}

TEST_CASE("true_support thresholding") {
  CHECK(oracle::true_support({0.0, 0.0}).empty());
  const auto sup = oracle::true_support({1e-12, 0.5});
  REQUIRE(sup.size() == 1);
  CHECK(sup[0] == 1);
}

TEST_CASE("dense and fast evaluations agree") {
  std::mt19937_64 g(73);
  for (int trial = 0; trial < 20; ++trial) {
    const Penalty pen = trial % 2 ? Penalty::KL : Penalty::L2;
    ProblemSpec spec = testutil::random_instance(g, 5, 6, 0.4, pen);
    ScreeningState full = ScreeningState::full(spec.nm());
    Vec t(static_cast<std::size_t>(spec.nm()));
    for (double& v : t) v = 0.2 * testutil::u01(g);
    const double fast = primal_objective(t, spec, full);
    const double dense = oracle::dense_primal(t, spec);
    CHECK(fast == doctest::Approx(dense).epsilon(1e-14));
    Vec theta(static_cast<std::size_t>(spec.n + spec.m));
    for (double& v : theta) v = testutil::uniform(g, -1, 1);
    const PenaltyModel mdl = make_penalty_model(spec);
    CHECK(dual_value(theta, mdl) ==
          doctest::Approx(oracle::dense_dual(theta, spec)).epsilon(1e-14));
  }
}

TEST_CASE("LP vertex enumeration matches the low-lambda UOT support") {
  std::mt19937_64 g(74);
  for (int trial = 0; trial < 5; ++trial) {
    ProblemSpec spec = testutil::random_instance(g, 3, 3, 1.0, Penalty::L2);
    // balance the marginals exactly
    double sa = 0.0, sb = 0.0;
    for (double v : spec.a) sa += v;
    for (double v : spec.b) sb += v;
    for (double& v : spec.b) v *= sa / sb;
    const auto lp = oracle::lp_vertex_support(spec);
    CHECK(!lp.empty());
    CHECK(static_cast<Index>(lp.size()) <= 5);

    spec.lambda = 1e-5;
    const oracle::Reference ref = oracle::reference_solve(spec);
    // at vanishing lambda the UOT support matches the LP vertex support
    auto uot_sup = oracle::true_support(ref.t_hat, 1e-6);
    CHECK(uot_sup == lp);
  }
}

TEST_CASE("brute maximizer on known closed forms") {
  // point region: center sum exactly
  BallRegion point{{0.25, -0.5}, 0.0};
  CHECK(oracle::brute_region_max(0, point, {}, 1, 1) == doctest::Approx(-0.25));

  // ball without half-spaces: center sum + r sqrt(2)
  BallRegion ball{{0.1, 0.2, 0.3, 0.4}, 0.7};
  const double expect = 0.1 + 0.4 + 0.7 * std::sqrt(2.0);
  CHECK(oracle::brute_region_max(1, ball, {}, 2, 2) == doctest::Approx(expect).epsilon(1e-9));
}
