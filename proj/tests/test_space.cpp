#include <doctest.h>

#include <cmath>
#include <limits>

#include "support.hpp"
#include "vincl/space.hpp"

using namespace vincl;

TEST_SUITE("space") {

TEST_CASE("duality map identities on seeded vectors") {
  std::mt19937_64 rng(7);
  for (double q : {2.0, 3.0, 4.0}) {
    CAPTURE(q);
    for (int i = 0; i < 1000; ++i) {
      const auto x = vincl_test::random_vector(rng, 1 + i % 6);
      const auto j = duality_map(x, q);
      const double nx = norm(x);
      CHECK(inner(x, j) == doctest::Approx(std::pow(nx, q)).epsilon(1e-12));
      CHECK(norm(j) == doctest::Approx(std::pow(nx, q - 1.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("duality map at zero is zero") {
  for (double q : {1.5, 2.0, 3.0}) CHECK(duality_map(Vector::zeros(3), q) == Vector::zeros(3));
}

TEST_CASE("duality map at q = 2 is the identity") {
  const Vector x{3.0, -4.0};
  CHECK(duality_map(x, 2.0) == x);
}

TEST_CASE("characteristic inequality is an identity in Euclidean space at q = 2") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const auto x = vincl_test::random_vector(rng, 4);
    const auto y = vincl_test::random_vector(rng, 4);
    CHECK(characteristic_inequality_check(x, y, 2.0, 1.0));
  }
}

TEST_CASE("characteristic inequality fails at q = 3 for small orthogonal perturbations") {
  // ||e1 + t e2||^3 ~ 1 + 1.5 t^2 exceeds 1 + c t^3 for small t.
  CHECK_FALSE(characteristic_inequality_check(Vector{1.0, 0.0}, Vector{0.0, 0.1}, 3.0, 1.0));
}

TEST_CASE("vector construction rejects non-finite coordinates") {
  try {
    Vector v{1.0, std::numeric_limits<double>::quiet_NaN()};
    FAIL("expected non_finite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::non_finite);
  }
  CHECK_THROWS_AS(Vector(std::vector<double>{}), Error);
}

TEST_CASE("dimension mismatch is reported") {
  try {
    (void)inner(Vector{1.0}, Vector{1.0, 2.0});
    FAIL("expected dimension_mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::dimension_mismatch);
  }
}

TEST_CASE("space config validation") {
  SpaceConfig s;
  CHECK_NOTHROW(s.validate());
  s.q = 1.0;
  try {
    s.validate();
    FAIL("expected invalid_exponent");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_exponent);
  }
  s.q = 2.0;
  s.c_q = 0.0;
  CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("basis vectors") {
  const auto e = Vector::basis(4, 2);
  CHECK(e[2] == 1.0);
  CHECK(norm(e) == 1.0);
  CHECK_THROWS_AS(Vector::basis(4, 4), Error);
}

}
