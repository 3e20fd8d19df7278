#include <doctest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "uot/core.hpp"
#include "uot/oracle.hpp"
#include "uot/penalty.hpp"
#include "uot/solvers.hpp"

using namespace uot;

TEST_CASE("default stepsizes") {
  std::mt19937_64 g(61);
  ProblemSpec spec = testutil::random_instance(g, 3, 3, 1.0, Penalty::L2);
  CHECK(default_stepsize(SolverKind::Fista, spec) == doctest::Approx(1.0 / 6.0));
  CHECK(default_stepsize(SolverKind::MM, spec) == 0.5);
}

TEST_CASE("fista solves the 1x1 hand instance") {
  const ProblemSpec spec = testutil::hand_instance();
  SolverConfig cfg;
  cfg.kind = SolverKind::Fista;
  cfg.gap_tol = 1e-10;
  cfg.max_iters = 200;
  cfg.screen_period = 1;
  const RunResult run = run_with_screening(spec, cfg);
  CHECK(run.converged);
  CHECK(run.t[0] == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(run.final_gap <= 1e-10);
  CHECK(run.iters <= 200);
}

TEST_CASE("fista step is stationary at the optimum") {
  // exactly optimal point: the 1x1 hand instance has t_hat = 0 with the
  // gradient vanishing there, so the step reproduces it bit for bit
  const ProblemSpec hand = testutil::hand_instance();
  ScreeningState one = ScreeningState::full(1);
  FistaState hand_it;
  hand_it.t = {0.0};
  hand_it.t_prev = {0.0};
  fista_step(hand_it, hand, one, default_stepsize(SolverKind::Fista, hand));
  CHECK(std::abs(hand_it.t[0]) <= 1e-14);

  // a value-certified oracle point moves at most O(sqrt(gap)) under one step
  std::mt19937_64 g(62);
  ProblemSpec spec = testutil::random_instance(g, 4, 4, 0.5, Penalty::L2);
  const oracle::Reference ref = oracle::reference_solve(spec);
  ScreeningState st = ScreeningState::full(spec.nm());
  FistaState it;
  it.t = ref.t_hat;
  it.t_prev = ref.t_hat;
  it.tau = 1.0;
  fista_step(it, spec, st, default_stepsize(SolverKind::Fista, spec));
  for (std::size_t k = 0; k < it.t.size(); ++k)
    CHECK(std::abs(it.t[k] - ref.t_hat[k]) <= 1e-5);
}

TEST_CASE("fista rejects KL") {
  std::mt19937_64 g(63);
  ProblemSpec spec = testutil::random_instance(g, 3, 3, 1.0, Penalty::KL);
  SolverConfig cfg;
  cfg.kind = SolverKind::Fista;
  CHECK_THROWS_AS(run_with_screening(spec, cfg), UnsupportedError);
  cfg.kind = SolverKind::CD;
  CHECK_THROWS_AS(run_with_screening(spec, cfg), UnsupportedError);
}

TEST_CASE("mm objective is non-increasing") {
  std::mt19937_64 g(64);
  for (int trial = 0; trial < 20; ++trial) {
    const Penalty pen = trial % 2 ? Penalty::KL : Penalty::L2;
    ProblemSpec spec = testutil::random_instance(g, 3 + trial % 4, 3 + (trial / 2) % 4,
                                                 std::exp(testutil::uniform(g, -2, 0)), pen);
    ScreeningState st = ScreeningState::full(spec.nm());
    Vec t(static_cast<std::size_t>(spec.nm()));
    for (double& v : t) v = 0.05 + 0.2 * testutil::u01(g);
    double prev = primal_objective(t, spec, st);
    for (int step = 0; step < 50; ++step) {
      mm_step(t, spec, st, 0.5);
      const double cur = primal_objective(t, spec, st);
      CHECK(cur <= prev + 1e-12 * std::max(1.0, std::abs(prev)));
      prev = cur;
    }
  }
}

TEST_CASE("mm drives KL mass to zero under huge costs") {
  ProblemSpec spec = testutil::hand_instance();
  spec.penalty = Penalty::KL;
  spec.epsilon = 0.1;
  spec.c = {50.0};
  ScreeningState st = ScreeningState::full(1);
  Vec t{0.5};
  for (int k = 0; k < 300; ++k) mm_step(t, spec, st, 0.5);
  CHECK(t[0] <= 1e-8);
}

TEST_CASE("mm is a fixed point at the oracle optimum") {
  std::mt19937_64 g(65);
  for (int trial = 0; trial < 4; ++trial) {
    const Penalty pen = trial % 2 ? Penalty::KL : Penalty::L2;
    ProblemSpec spec = testutil::random_instance(g, 4, 5, 0.5, pen);
    const oracle::Reference ref = oracle::reference_solve(spec);
    ScreeningState st = ScreeningState::full(spec.nm());
    Vec t(ref.t_hat);
    mm_step(t, spec, st, 0.5);
    for (std::size_t k = 0; k < t.size(); ++k)
      CHECK(std::abs(t[k] - ref.t_hat[k]) <= 1e-9);
  }
}

TEST_CASE("cd solves the 1x1 hand instance in one pass") {
  const ProblemSpec spec = testutil::hand_instance();
  ScreeningState st = ScreeningState::full(1);
  Vec t{0.7};
  cd_step(t, spec, st);
  CHECK(t[0] == 0.0);
}

TEST_CASE("cd objective is non-increasing and agrees with fista") {
  std::mt19937_64 g(66);
  for (int trial = 0; trial < 6; ++trial) {
    ProblemSpec spec = testutil::random_instance(g, 5, 4, 0.3, Penalty::L2);
    ScreeningState st = ScreeningState::full(spec.nm());
    Vec t(static_cast<std::size_t>(spec.nm()), 0.0);
    double prev = primal_objective(t, spec, st);
    for (int pass = 0; pass < 200; ++pass) {
      cd_step(t, spec, st);
      const double cur = primal_objective(t, spec, st);
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }

    // run to a certified gap and compare optima across solvers
    SolverConfig cd_cfg;
    cd_cfg.kind = SolverKind::CD;
    cd_cfg.gap_tol = 1e-8;
    cd_cfg.max_iters = 300000;
    const RunResult cd_run = run_with_screening(spec, cd_cfg);
    CHECK(cd_run.converged);
    SolverConfig cfg;
    cfg.kind = SolverKind::Fista;
    cfg.gap_tol = 1e-12;
    cfg.max_iters = 200000;
    const RunResult run = run_with_screening(spec, cfg);
    ScreeningState full = ScreeningState::full(spec.nm());
    CHECK(std::abs(primal_objective(cd_run.t, spec, full) -
                   primal_objective(run.t, spec, full)) <= 1e-8);
  }
}

TEST_CASE("l2 smoothness constant n+m") {
  std::mt19937_64 g(67);
  for (int probe = 0; probe < 1000; ++probe) {
    const Index n = 2 + static_cast<Index>(g() % 8);
    const Index m = 2 + static_cast<Index>(g() % 8);
    ProblemSpec spec = testutil::random_instance(g, n, m, 1.0, Penalty::L2);
    ScreeningState st = ScreeningState::full(n * m);
    Vec t(static_cast<std::size_t>(n * m)), d(static_cast<std::size_t>(n * m));
    for (double& v : t) v = testutil::u01(g);
    for (double& v : d) v = testutil::uniform(g, -1, 1);
    const Vec y = marginals(spec);
    auto H = [&](const Vec& v) {
      const Vec z = apply_X(v, st, n, m);
      double s = 0.0;
      for (std::size_t k = 0; k < z.size(); ++k) s += 0.5 * (z[k] - y[k]) * (z[k] - y[k]);
      return s;
    };
    Vec td(t);
    double dd = 0.0, gd = 0.0;
    const Vec zt = apply_X(t, st, n, m);
    for (std::size_t k = 0; k < t.size(); ++k) {
      td[k] += d[k];
      dd += d[k] * d[k];
      const Index p = st.active_to_original[k];
      gd += d[k] * ((zt[static_cast<std::size_t>(p / m)] - y[static_cast<std::size_t>(p / m)]) +
                    (zt[static_cast<std::size_t>(n + p % m)] - y[static_cast<std::size_t>(n + p % m)]));
    }
    CHECK(H(td) <= H(t) + gd + 0.5 * static_cast<double>(n + m) * dd + 1e-9);
  }
}

TEST_CASE("primal gradient matches central finite differences") {
  std::mt19937_64 g(68);
  for (int trial = 0; trial < 10; ++trial) {
    const Penalty pen = trial % 2 ? Penalty::KL : Penalty::L2;
    ProblemSpec spec = testutil::random_instance(g, 3, 4, 0.7, pen);
    ScreeningState st = ScreeningState::full(spec.nm());
    Vec t(static_cast<std::size_t>(spec.nm()));
    for (double& v : t) v = 0.05 + 0.2 * testutil::u01(g);
    const Vec z = apply_X(t, spec.penalty == Penalty::KL ? st : st, spec.n, spec.m);
    const Vec y = marginals(spec);
    for (Index p = 0; p < spec.nm(); ++p) {
      const Index i = p / spec.m, j = p % spec.m;
      double analytic = spec.lambda * spec.c[static_cast<std::size_t>(p)];
      if (pen == Penalty::L2) {
        analytic += (z[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)]) +
                    (z[static_cast<std::size_t>(spec.n + j)] - y[static_cast<std::size_t>(spec.n + j)]);
      } else {
        analytic += std::log((z[static_cast<std::size_t>(i)] + spec.epsilon) /
                             y[static_cast<std::size_t>(i)]) +
                    std::log((z[static_cast<std::size_t>(spec.n + j)] + spec.epsilon) /
                             y[static_cast<std::size_t>(spec.n + j)]);
      }
      const double h = 1e-6;
      Vec tp(t), tm(t);
      tp[static_cast<std::size_t>(p)] += h;
      tm[static_cast<std::size_t>(p)] -= h;
      const double fd =
          (primal_objective(tp, spec, st) - primal_objective(tm, spec, st)) / (2 * h);
      CHECK(analytic == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("run_with_screening baseline and consistency") {
  std::mt19937_64 g(69);
  ProblemSpec spec = testutil::random_instance(g, 8, 7, 0.1, Penalty::L2);
  SolverConfig plain;
  plain.kind = SolverKind::Fista;
  plain.gap_tol = 1e-9;
  plain.max_iters = 100000;
  const RunResult base = run_with_screening(spec, plain);
  CHECK(base.converged);
  CHECK(base.screened == 0);
  for (const IterateTrace& row : base.trace) {
    CHECK(row.gap == doctest::Approx(row.primal - row.dual).epsilon(1e-12));
    CHECK(row.gap >= -1e-10);
  }

  SolverConfig scr = plain;
  scr.method = ScreenMethod::SaCtp;
  const RunResult run = run_with_screening(spec, scr);
  CHECK(run.converged);
  CHECK(run.screened > 0);
  ScreeningState full = ScreeningState::full(spec.nm());
  CHECK(std::abs(primal_objective(run.t, spec, full) -
                 primal_objective(base.t, spec, full)) <= 10 * plain.gap_tol);

  // screened counts are nondecreasing along the trace
  for (std::size_t k = 1; k < run.trace.size(); ++k)
    CHECK(run.trace[k].screened >= run.trace[k - 1].screened);
}

TEST_CASE("incompatible method/penalty fails before iterating") {
  std::mt19937_64 g(70);
  ProblemSpec spec = testutil::random_instance(g, 3, 3, 1.0, Penalty::KL);
  SolverConfig cfg;
  cfg.kind = SolverKind::MM;
  cfg.method = ScreenMethod::SaCtp;
  CHECK_THROWS_AS(run_with_screening(spec, cfg), UnsupportedError);
}

TEST_CASE("screen everything terminates the loop") {
  // the optimum destroys all mass (huge cost) while MM starts positive, so
  // the first screening pass certifies every entry and empties the problem
  ProblemSpec spec = testutil::hand_instance();
  spec.penalty = Penalty::KL;
  spec.epsilon = 0.3;
  spec.c = {50.0};
  SolverConfig cfg;
  cfg.kind = SolverKind::MM;
  cfg.method = ScreenMethod::Gap;
  cfg.gap_tol = 1e-13;
  cfg.screen_period = 1;
  cfg.max_iters = 5000;
  const RunResult run = run_with_screening(spec, cfg);
  CHECK(run.converged);
  CHECK(run.screened == 1);
  CHECK(run.t[0] == 0.0);
  CHECK(run.state.active_count() == 0);
}
