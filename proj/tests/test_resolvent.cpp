#include <doctest.h>

#include "support.hpp"
#include "vincl/instances.hpp"
#include "vincl/resolvent.hpp"

using namespace vincl;

TEST_SUITE("resolvent") {

TEST_CASE("forward of the resolvent is the identity") {
  std::mt19937_64 rng(5);
  for (const auto& named : {example_3_2(), example_4_7()}) {
    const auto& inst = named.instance;
    ResolventConfig cfg;
    cfg.rho = inst.rho;
    const Resolvent R(inst, cfg);
    CHECK(R.exact());
    for (int i = 0; i < 50; ++i) {
      const auto z = vincl_test::random_vector(rng, 2);
      CHECK(distance(forward(inst, cfg.rho, R(z)), z) <= 1e-10 * (1.0 + norm(z)));
    }
  }
}

TEST_CASE("damped fixed point agrees with the exact solve") {
  const auto inst = example_4_7().instance;
  ResolventConfig exact;
  exact.rho = 0.35;
  ResolventConfig damped = exact;
  damped.solver = ResolventSolver::damped_fixed_point;
  const Resolvent Re(inst, exact), Rd(inst, damped);
  CHECK_FALSE(Rd.exact());
  // ||f - g|| = 0.6346477588219923 for the 4.7 data.
  CHECK(Rd.damping() == doctest::Approx(1.0 / (2.9 + 0.35 * 0.6346477588219923)));
  const Vector z{3.0, -1.0};
  CHECK(distance(Re(z), Rd(z)) <= 1e-9);
}

TEST_CASE("black-box constituents use the damped path") {
  auto inst = example_4_7().instance;
  inst.g = SingleValuedMap::from_function(2, [](const Vector& x) {
    return Vector{0.25 * x[0] - 0.75 * x[1], 0.75 * x[0] + 0.25 * x[1]};
  });
  ResolventConfig cfg;
  cfg.rho = 0.35;
  const Resolvent R(inst, cfg);
  CHECK_FALSE(R.exact());
  const Vector z{1.0, 2.0};
  CHECK(distance(forward(inst, 0.35, R(z)), z) <= 1e-10);
  cfg.solver = ResolventSolver::exact_affine;
  CHECK_THROWS_AS(Resolvent(inst, cfg), Error);
}

TEST_CASE("example 3.3 is not surjective") {
  const auto inst = example_3_3(8, 3).instance;
  ResolventConfig cfg;
  try {
    (void)resolve(inst, cfg, Vector::zeros(8));
    FAIL("expected NonSurjectiveError");
  } catch (const NonSurjectiveError& e) {
    CHECK(e.code() == ErrorCode::non_surjective);
    REQUIRE(e.image_norm());
    CHECK(*e.image_norm() == doctest::Approx(2.0));
    CHECK(std::string(e.what()).find("rho=1:") != std::string::npos);
  }
}

TEST_CASE("near-singular composites are rejected") {
  auto inst = example_4_7().instance;
  Matrix almost(2, 2);
  almost << 1.0, 1.0, 1.0, 1.0 + 1e-14;
  inst.A = SingleValuedMap::linear(almost);
  inst.B = inst.C = inst.D = inst.f = inst.g = SingleValuedMap::zero(2);
  ResolventConfig cfg;
  CHECK_THROWS_AS(Resolvent(inst, cfg), NonSurjectiveError);
  const auto a = analyze_composite(*composite_affine(inst), 1.0);
  CHECK(a.singular);
  CHECK(a.rank == 1);
}

TEST_CASE("config validation") {
  ResolventConfig cfg;
  cfg.rho = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.rho = 1.0;
  cfg.max_inner_iters = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("lipschitz audit on 4.7") {
  const auto inst = example_4_7().instance;
  ResolventConfig cfg;
  cfg.rho = 0.35;
  const auto a = audit_lipschitz(inst, cfg, SamplePlan{});
  CHECK(a.pairs_checked >= 512);
  CHECK(a.bound == doctest::Approx(1.0 / 2.9875).epsilon(1e-14));
  CHECK(a.pass);
  CHECK(a.worst_ratio <= vincl_test::oracle::resolvent_norm_4_7 + 1e-12);
  CHECK(a.worst_ratio == doctest::Approx(vincl_test::oracle::resolvent_norm_4_7).epsilon(1e-6));
}

TEST_CASE("lipschitz audit on 3.2") {
  const auto inst = example_3_2().instance;
  ResolventConfig cfg;
  const auto a = audit_lipschitz(inst, cfg, SamplePlan{});
  CHECK(a.bound == doctest::Approx(vincl_test::oracle::audit_bound_3_2).epsilon(1e-14));
  CHECK(a.pass);
  CHECK(a.worst_ratio <= vincl_test::oracle::resolvent_norm_3_2 + 1e-12);
}

}
