#include <doctest.h>

#include "vincl/certify.hpp"
#include "vincl/instances.hpp"

using namespace vincl;

namespace {

Matrix rot_scale(double a, double b) {
  Matrix m(2, 2);
  m << a, -b, b, a;
  return m;
}

const Certificate& find(const CertificateBundle& b, Property p, const std::string& subject = {}) {
  for (const auto& c : b.certificates) {
    if (c.property == p && (subject.empty() || c.subject == subject)) return c;
  }
  FAIL("no certificate for " << to_string(p) << " " << subject);
  throw 0;
}

SamplePlan small_plan() {
  SamplePlan p;
  p.pairs = 64;
  return p;
}

}  // namespace

TEST_SUITE("certify") {

TEST_CASE("lipschitz constant of a scaled rotation is exact") {
  const auto map = SingleValuedMap::linear(rot_scale(3.0, 4.0));
  const auto ok = certify_lipschitz(map, 5.0, small_plan());
  CHECK(ok.verdict == Verdict::pass);
  CHECK(ok.method == Method::exact_affine);
  CHECK(ok.constant == doctest::Approx(5.0).epsilon(1e-12));

  const auto bad = certify_lipschitz(map, 4.0, small_plan());
  CHECK(bad.verdict == Verdict::fail);
  REQUIRE(bad.witness.x);
  CHECK(bad.witness.lhs > bad.witness.rhs);
}

TEST_CASE("strong accretivity is monotone in the claim") {
  const auto map = SingleValuedMap::linear(rot_scale(2.0, 7.0));
  // <Mx, x> = 2 ||x||^2 regardless of the rotation part.
  CHECK(certify_strong_accretive(map, 1.5, 2.0, small_plan()).verdict == Verdict::pass);
  CHECK(certify_strong_accretive(map, 2.0, 2.0, small_plan()).verdict == Verdict::pass);
  CHECK(certify_strong_accretive(map, 2.5, 2.0, small_plan()).verdict == Verdict::fail);
  CHECK(certify_strong_accretive(map, 1.5, 2.0, small_plan()).constant ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("expansive constant is the smallest singular value") {
  Matrix m(2, 2);
  m << 3.0, 0.0, 0.0, 0.5;
  const auto c = certify_expansive(SingleValuedMap::linear(m), 0.5, small_plan());
  CHECK(c.verdict == Verdict::pass);
  CHECK(c.constant == doctest::Approx(0.5));
  CHECK(certify_expansive(SingleValuedMap::linear(m), 0.6, small_plan()).verdict == Verdict::fail);
}

TEST_CASE("sampled certificates never pass") {
  const auto map =
      SingleValuedMap::from_function(2, [](const Vector& x) { return 2.0 * x; });
  const auto c = certify_lipschitz(map, 3.0, small_plan());
  CHECK(c.method == Method::sampled);
  CHECK(c.verdict == Verdict::estimated);
  CHECK(c.constant == doctest::Approx(2.0));
  REQUIRE(c.seed);
  CHECK(c.samples_checked > 0);

  auto forced = small_plan();
  forced.force_sampled = true;
  CHECK(certify_lipschitz(SingleValuedMap::identity(2), 1.0, forced).verdict == Verdict::estimated);
  CHECK(certify_lipschitz(map, 1.0, small_plan()).verdict == Verdict::fail);
}

TEST_CASE("non-positive claims are rejected") {
  CHECK_THROWS_AS(certify_lipschitz(SingleValuedMap::identity(2), 0.0, small_plan()), Error);
  CHECK_THROWS_AS(certify_relaxed_accretive(SingleValuedMap::identity(2), -1.0, 2.0, small_plan()),
                  Error);
}

TEST_CASE("example 3.2 constants") {
  const auto named = example_3_2();
  const auto b = certify_instance(named.instance, SamplePlan{}, default_rho_grid(named.instance));
  const auto& first = find(b, Property::strongly_mixed_cocoercive);
  CHECK(first.constant == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(first.detail("mu") == doctest::Approx(0.25));
  const auto& second = find(b, Property::relaxed_mixed_cocoercive);
  CHECK(second.constant == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(second.detail("mu") == doctest::Approx(1.0 / 3.0));
  CHECK(find(b, Property::mixed_lipschitz).constant == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(find(b, Property::strongly_accretive).constant == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(find(b, Property::relaxed_accretive).constant == doctest::Approx(1.75).epsilon(1e-12));
  CHECK(b.r == doctest::Approx(4.0));
  CHECK(b.m == doctest::Approx(3.25));
  for (const auto& o : evaluate_expectations(named, b)) {
    CAPTURE(to_string(o.expectation->property));
    CHECK(o.met);
  }
}

TEST_CASE("example 4.7 constants") {
  const auto named = example_4_7();
  const auto b = certify_instance(named.instance, SamplePlan{}, default_rho_grid(named.instance));
  CHECK(find(b, Property::lipschitz, "B").constant == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(find(b, Property::expansive, "A").constant == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(find(b, Property::F_strongly_accretive_first).constant == doctest::Approx(0.725));
  CHECK(find(b, Property::F_strongly_accretive_second).constant == doctest::Approx(0.58));
  CHECK(b.r == doctest::Approx(2.9));
  CHECK(b.m == doctest::Approx(0.25));
  CHECK(b.all_ok());
  CHECK_FALSE(b.ordering_violations.empty());
  const auto [r, m] = resolvent_constants(named.instance.constants, 2.0);
  CHECK(r == doctest::Approx(2.9));
  CHECK(m == doctest::Approx(0.25));
}

TEST_CASE("example 3.3 fails surjectivity with the constant-image witness") {
  const auto named = example_3_3(8, 3);
  const auto& inst = named.instance;
  const auto surj = certify_surjectivity(inst, {1.0}, SamplePlan{});
  CHECK(surj.verdict == Verdict::fail);
  const auto g = certify_generalized_mixed_accretive(inst, {1.0}, SamplePlan{});
  CHECK(g.verdict == Verdict::fail);
  CHECK(g.detail("image_norm") == doctest::Approx(2.0));
  const auto sym = certify_symmetric_accretive(inst, SamplePlan{});
  CHECK(sym.alpha.constant == doctest::Approx(2.0));
  CHECK(sym.beta.constant == doctest::Approx(1.0));
  CHECK(sym.combined.verdict == Verdict::pass);
}

TEST_CASE("example 3.3 index range") {
  CHECK_THROWS_AS(example_3_3(8, 0), Error);
  CHECK_THROWS_AS(example_3_3(8, 9), Error);
}

TEST_CASE("every builtin meets its declared expectations") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    const auto named = *builtin_instance(name);
    const auto b = certify_instance(named.instance, small_plan(), default_rho_grid(named.instance));
    for (const auto& o : evaluate_expectations(named, b)) {
      CAPTURE(to_string(o.expectation->property));
      CHECK(o.met);
    }
  }
}

TEST_CASE("certified bundles are deterministic for a fixed seed") {
  const auto inst = example_4_7().instance;
  const auto a = certify_instance(inst, SamplePlan{}, {0.35});
  const auto b = certify_instance(inst, SamplePlan{}, {0.35});
  REQUIRE(a.certificates.size() == b.certificates.size());
  for (std::size_t i = 0; i < a.certificates.size(); ++i) {
    CHECK(a.certificates[i].constant == b.certificates[i].constant);
  }
}

}
