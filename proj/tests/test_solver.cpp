#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "vincl/instances.hpp"
#include "vincl/solver.hpp"

using namespace vincl;
namespace oracle = vincl_test::oracle;

namespace {

Vector at(const double (&c)[2]) { return Vector{c[0], c[1]}; }

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("condition (vi) on 4.7 at rho = 0.35") {
  // Direct evaluation of the bound with the published constants:
  // r = (10*0.1^2 - 5*0.2^2) + (2 + 1) = 2.9, m = 0.5 - 0.25.
  const double radicand =
      2.9 * 2.9 + 0.35 * 0.35 * std::pow(0.25 + 0.2, 2) - 0.35 * 2 * (0.725 + 0.58) * 2.9 * 2.9;
  const double hand_theta = std::sqrt(radicand) / (2.9 + 0.35 * 0.25);
  CHECK(hand_theta == doctest::Approx(oracle::theta_4_7).epsilon(1e-14));

  const auto rep = check_condition_vi(example_4_7().instance, 0.35);
  CHECK(rep.verdict == ConditionVerdict::satisfied);
  CHECK(rep.radicand == doctest::Approx(oracle::radicand_4_7).epsilon(1e-12));
  CHECK(rep.r == doctest::Approx(2.9));
  CHECK(rep.m == doctest::Approx(0.25));
  REQUIRE(rep.theta);
  CHECK(*rep.theta == doctest::Approx(oracle::theta_4_7).epsilon(1e-14));
  CHECK(theta(example_4_7().instance, 0.35) == doctest::Approx(oracle::theta_4_7).epsilon(1e-14));
}

TEST_CASE("condition (vi) verdicts") {
  CHECK(check_condition_vi(example_4_7().instance, 3.8).verdict ==
        ConditionVerdict::violated_radicand);

  auto inst = (*builtin_instance("reduction_h_ab")).instance;
  CHECK(check_condition_vi(inst, 0.1).verdict == ConditionVerdict::satisfied);
  CHECK(theta(inst, 0.1) == doctest::Approx(oracle::theta_h_ab).epsilon(1e-12));

  auto upper = inst;
  upper.constants.tau = 10.0;  // root ~ 10 > r + rho m = 3.65
  CHECK(check_condition_vi(upper, 0.1).verdict == ConditionVerdict::violated_upper);

  auto lower = inst;
  lower.constants.tau = 1.0;
  lower.constants.sigma = 5.0045;  // tau^2 (1 - 0.2 (sigma+delta)) + 0.0009 = 0
  lower.constants.delta = 0.0;
  CHECK(check_condition_vi(lower, 0.1).verdict == ConditionVerdict::violated_lower);
}

TEST_CASE("missing constants are listed") {
  auto inst = example_4_7().instance;
  inst.constants.sigma.reset();
  inst.constants.l2.reset();
  try {
    (void)check_condition_vi(inst, 0.35);
    FAIL("expected missing_constants");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::missing_constants);
    const std::string msg = e.what();
    CHECK(msg.find("sigma") != std::string::npos);
    CHECK(msg.find("l2") != std::string::npos);
  }
}

TEST_CASE("theta_n decreases to theta") {
  const auto inst = example_4_7().instance;
  CHECK_THROWS_AS(theta(inst, 0.35, 0), Error);
  double prev = theta(inst, 0.35, 1);
  for (std::size_t n = 2; n < 200; ++n) {
    const double t = theta(inst, 0.35, n);
    CHECK(t < prev);
    CHECK(t > oracle::theta_4_7);
    prev = t;
  }
  CHECK(theta(inst, 0.35, 1000000) == doctest::Approx(oracle::theta_4_7).epsilon(1e-5));
  CHECK_THROWS_AS(theta(inst, 3.8), Error);
}

TEST_CASE("nadler selection") {
  const PointSet s{Vector{1.0, 0.0}, Vector{0.0, 1.0}, Vector{-1.0, 0.0}};
  CHECK(nadler_select_index(Vector{0.0, 0.0}, s) == 0);
  CHECK(nadler_select_index(Vector{-0.5, 0.1}, s) == 2);
  CHECK(nadler_select(Vector{0.1, 5.0}, s) == s[1]);
  try {
    (void)nadler_select(Vector{0.0, 0.0}, {});
    FAIL("expected empty_set");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::empty_set);
  }
}

TEST_CASE("nadler selection always returns a member") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    PointSet s;
    for (int k = 0; k < 1 + i % 4; ++k) s.push_back(vincl_test::random_vector(rng, 3));
    const auto pick = nadler_select(vincl_test::random_vector(rng, 3), s);
    bool member = false;
    for (const auto& p : s) member = member || p == pick;
    CHECK(member);
  }
}

TEST_CASE("error sequences") {
  const auto e = ErrorSequence::geometric(0.1, 0.5);
  CHECK(norm(e.at(0, 2)) == doctest::Approx(0.1));
  CHECK(norm(e.at(3, 2)) == doctest::Approx(0.0125));
  CHECK(e.at(1, 2)[0] == doctest::Approx(e.at(1, 2)[1]));
  REQUIRE(e.varpi());
  CHECK(*e.varpi() == doctest::Approx(0.75));
  CHECK(norm(ErrorSequence::none().at(5, 2)) == 0.0);
  CHECK_THROWS_AS(ErrorSequence::geometric(0.1, 1.0).validate(2), Error);
  CHECK_THROWS_AS(ErrorSequence::geometric(0.1, 0.5, Vector{1.0}).validate(2), Error);
}

TEST_CASE("4.7 converges at the rate of the exact iteration map") {
  SolverConfig cfg;
  cfg.rho = 0.35;
  cfg.tol = 1e-12;
  const auto trace = solve(example_4_7().instance, cfg);
  REQUIRE(trace.summary.converged);
  CHECK(norm(trace.last().u) <= 1e-10);
  CHECK(trace.warnings.empty());
  // The step ratio is the norm of the linear iteration map, not theta.
  for (const auto& row : trace.rows) {
    if (row.n < 10 || !row.ratio) continue;
    CHECK(*row.ratio == doctest::Approx(oracle::iteration_map_norm_4_7).epsilon(1e-6));
  }
  REQUIRE(trace.summary.observed_rate);
  CHECK(*trace.summary.observed_rate ==
        doctest::Approx(oracle::iteration_map_norm_4_7).epsilon(1e-6));
  CHECK(trace.summary.final_residual <= 10 * 1e-12);
  CHECK(trace.summary.fixed_point_defect <= 1e-11);
}

TEST_CASE("trace rows follow the documented convention") {
  SolverConfig cfg;
  cfg.max_iters = 5;
  const auto trace = solve(example_4_7().instance, cfg);
  CHECK_FALSE(trace.summary.converged);
  REQUIRE(trace.rows.size() == 6);
  CHECK_FALSE(trace.rows[0].step);
  CHECK(trace.rows[1].step);
  CHECK_FALSE(trace.rows[1].ratio);
  CHECK(trace.rows[2].ratio);
  for (std::size_t i = 0; i < trace.rows.size(); ++i) CHECK(trace.rows[i].n == i);
  CHECK(trace.rows[1].theta_n);
}

TEST_CASE("constructed solutions are recovered") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 20; ++i) {
    auto inst = example_4_7().instance;
    const auto us = vincl_test::random_vector(rng, 2, 5.0);
    inst.omega = inst.F(us, us) + eval_M_on_point(inst, us).front();
    SolverConfig cfg;
    cfg.tol = 1e-12;
    const auto trace = solve(inst, cfg);
    CAPTURE(i);
    CHECK(trace.summary.converged);
    CHECK(distance(trace.last().u, us) <= 1e-8);
  }
}

TEST_CASE("geometric errors still converge") {
  SolverConfig cfg;
  cfg.tol = 1e-10;
  cfg.errors = ErrorSequence::geometric(0.1, 0.5);
  const auto trace = solve(example_4_7().instance, cfg);
  REQUIRE(trace.summary.converged);
  CHECK(trace.summary.final_error_norm <= 1e-20);
  CHECK(trace.summary.final_residual <= 10 * 1e-10);
  for (std::size_t i = 1; i < trace.rows.size(); ++i) {
    CHECK(trace.rows[i].error_norm <= trace.rows[i - 1].error_norm);
  }
}

TEST_CASE("reductions reach their closed-form solutions") {
  SolverConfig cfg;
  cfg.tol = 1e-12;
  const auto a = solve(reduction_zero_in_t_plus_n().instance, cfg);
  REQUIRE(a.summary.converged);
  CHECK(distance(a.last().u, at(oracle::zero_in_t_plus_n)) <= 1e-9);
  const auto b = solve(reduction_scaled_n(2.0).instance, cfg);
  REQUIRE(b.summary.converged);
  CHECK(distance(b.last().u, at(oracle::scaled_n_lambda2)) <= 1e-9);
}

TEST_CASE("builtin solver expectations") {
  for (const auto& name : builtin_names()) {
    const auto named = *builtin_instance(name);
    for (const auto& e : named.solver) {
      CAPTURE(name);
      SolverConfig cfg;
      cfg.rho = e.rho;
      cfg.tol = 1e-12;
      const auto trace = solve(named.instance, cfg);
      CHECK(trace.summary.converged);
      if (e.converges_to) CHECK(distance(trace.last().u, *e.converges_to) <= 1e-8);
      if (e.theta) {
        REQUIRE(trace.summary.theta);
        CHECK(std::abs(*trace.summary.theta - *e.theta) <= e.theta_tol + 1e-15);
      }
    }
  }
}

TEST_CASE("growing steps raise a divergence error with the trace") {
  auto inst = reduction_zero_in_t_plus_n().instance;
  inst.f = SingleValuedMap::zero(2);
  inst.T = FiniteSetValuedMap::identity(2);
  inst.F = PairMapF::affine(-5.0 * Matrix::Identity(2, 2), Matrix::Zero(2, 2), Vector::zeros(2));
  inst.constants = {};
  SolverConfig cfg;
  cfg.rho = 1.0;
  try {
    (void)solve(inst, cfg);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.code() == ErrorCode::divergence);
    CHECK(e.trace().rows.size() > 20);
    CHECK_FALSE(e.trace().warnings.empty());
  }
}

TEST_CASE("solver config validation") {
  SolverConfig cfg;
  cfg.tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(2), Error);
  cfg.tol = 1e-10;
  cfg.z0 = Vector{1.0};
  CHECK_THROWS_AS(cfg.validate(2), Error);
}

TEST_CASE("example 3.3 solve propagates non-surjectivity") {
  CHECK_THROWS_AS(solve(example_3_3().instance, SolverConfig{}), NonSurjectiveError);
}

}
