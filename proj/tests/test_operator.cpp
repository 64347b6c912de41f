#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "vincl/instances.hpp"
#include "vincl/operator.hpp"

using namespace vincl;

namespace {

PointSet random_set(std::mt19937_64& rng, std::size_t dim) {
  std::uniform_int_distribution<int> size(1, 5);
  PointSet s;
  for (int i = size(rng); i > 0; --i) s.push_back(vincl_test::random_vector(rng, dim));
  return s;
}

}  // namespace

TEST_SUITE("operator") {

TEST_CASE("hausdorff distance on small sets") {
  CHECK(hausdorff_distance({Vector{0.0, 0.0}}, {Vector{3.0, 4.0}}) == 5.0);
  CHECK(hausdorff_distance({Vector{0.0, 0.0}, Vector{1.0, 0.0}}, {Vector{0.0, 0.0}}) == 1.0);
  const PointSet a{Vector{0.0}, Vector{10.0}};
  const PointSet b{Vector{1.0}};
  CHECK(hausdorff_distance(a, b) == 9.0);
  CHECK(hausdorff_distance(b, a) == 9.0);
  CHECK(hausdorff_distance(a, a) == 0.0);
}

TEST_CASE("hausdorff distance of an empty set throws") {
  try {
    (void)hausdorff_distance({}, {Vector{1.0}});
    FAIL("expected empty_set");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::empty_set);
  }
}

TEST_CASE("hausdorff triangle inequality on seeded triples") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const std::size_t dim = 1 + i % 3;
    const auto a = random_set(rng, dim), b = random_set(rng, dim), c = random_set(rng, dim);
    const double ab = hausdorff_distance(a, b), bc = hausdorff_distance(b, c);
    CHECK(hausdorff_distance(a, c) <= ab + bc + 1e-12 * (1.0 + ab + bc));
  }
}

TEST_CASE("H composite and forward image on the 3.2 data") {
  const auto inst = example_3_2().instance;
  const Vector x{1.0, 2.0};
  CHECK(eval_H_on_point(inst, x) == Vector{4.0, 8.0});
  const auto image = forward_image(inst, 1.0, x);
  REQUIRE(image.size() == 1);
  CHECK(image[0][0] == doctest::Approx(4.416666666666667).epsilon(1e-14));
  CHECK(image[0][1] == doctest::Approx(15.916666666666666).epsilon(1e-14));
}

TEST_CASE("composite affine form exists only for affine data") {
  auto inst = example_4_7().instance;
  const auto comp = composite_affine(inst);
  REQUIRE(comp);
  CHECK(comp->h_linear(0, 0) == doctest::Approx(2.9));
  CHECK(comp->m_linear(0, 0) == doctest::Approx(0.25));
  inst.f = SingleValuedMap::from_function(2, [](const Vector& x) { return x; });
  CHECK_FALSE(composite_affine(inst));
}

TEST_CASE("inclusion residual on the 4.7 data") {
  auto inst = example_4_7().instance;
  // u* = (1,-2) solves omega in F(u,u) + M(f(u),g(u)) once omega = (P+Q+N) u*.
  const Vector us{1.0, -2.0};
  inst.omega = inst.F(us, us) + eval_M_on_point(inst, us).front();
  const auto at_solution = inclusion_residual(inst, us, us, us);
  CHECK(at_solution.value == doctest::Approx(0.0));
  CHECK_FALSE(at_solution.flagged());
  const Vector off = us + Vector{1.0, 0.0};
  CHECK(inclusion_residual(inst, off, off, off).value ==
        doctest::Approx(vincl_test::oracle::residual_4_7_unit_offset).epsilon(1e-12));
}

TEST_CASE("residual flags v outside S(u)") {
  const auto inst = example_4_7().instance;
  const Vector u{1.0, 1.0};
  const auto r = inclusion_residual(inst, u, Vector{0.0, 0.0}, u);
  CHECK_FALSE(r.v_in_S);
  CHECK(r.w_in_T);
  CHECK(r.v_distance == doctest::Approx(std::sqrt(2.0)));
  CHECK(r.flagged());
}

TEST_CASE("grid map picks nearest node with lowest index on ties") {
  FiniteSetValuedMap::Grid g;
  g.nodes = {Vector{-1.0}, Vector{1.0}};
  g.values = {{Vector{-5.0}}, {Vector{5.0}}};
  const auto m = FiniteSetValuedMap::grid(g);
  CHECK(m(Vector{0.0}).front() == Vector{-5.0});
  CHECK(m(Vector{0.9}).front() == Vector{5.0});
}

TEST_CASE("branch map returns every branch") {
  const auto m = FiniteSetValuedMap::branches(
      {AffineRealization{Matrix::Identity(2, 2), Vector{0.0, 0.0}},
       AffineRealization{2.0 * Matrix::Identity(2, 2), Vector{1.0, 0.0}}});
  const auto s = m(Vector{1.0, 1.0});
  REQUIRE(s.size() == 2);
  CHECK(s[1] == Vector{3.0, 2.0});
}

TEST_CASE("constants slots and missing names") {
  Constants k;
  k.set("tau", 2.0);
  CHECK(k.get("tau") == 2.0);
  CHECK(k.missing({"tau", "sigma"}) == std::vector<std::string>{"sigma"});
  CHECK_THROWS_AS(k.set("bogus", 1.0), Error);
  CHECK_THROWS_AS(k.require("sigma"), Error);
}

TEST_CASE("instance validation catches dimension mismatches") {
  auto inst = example_4_7().instance;
  inst.A = SingleValuedMap::identity(3);
  CHECK_THROWS_AS(inst.validate(), Error);
}

TEST_CASE("ordering violations of the 4.7 constants") {
  // alpha1 = 0.1 < beta1 = 0.2 in the published constant block.
  const auto v = example_4_7().instance.ordering_violations();
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("alpha1") != std::string::npos);
}

}
