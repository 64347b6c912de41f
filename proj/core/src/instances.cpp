#include "vincl/instances.hpp"

#include <cmath>

#include <Eigen/LU>

namespace vincl {

std::string_view to_string(Source s) {
  switch (s) {
    case Source::published: return "published";
    case Source::derived: return "derived";
    case Source::trivial: return "trivial";
  }
  return "unknown";
}

std::vector<ExpectationOutcome> evaluate_expectations(const NamedInstance& named,
                                                      const CertificateBundle& bundle) {
  std::vector<ExpectationOutcome> out;
  for (const auto& e : named.certificates) {
    ExpectationOutcome o;
    o.expectation = &e;
    for (const auto& c : bundle.certificates) {
      if (c.property != e.property) continue;
      if (!e.subject.empty() && c.subject != e.subject) continue;
      o.certificate = &c;
      break;
    }
    if (o.certificate) {
      o.met = o.certificate->verdict == e.verdict;
      if (e.constant) {
        o.met = o.met && std::abs(o.certificate->constant - *e.constant) <= 1e-9;
      }
    }
    out.push_back(o);
  }
  return out;
}

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix scaled(std::size_t n, double s) {
  return s * Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

SingleValuedMap lin(Matrix m) { return SingleValuedMap::linear(std::move(m)); }

InclusionInstance base_instance(std::string name, std::size_t dim, double rho) {
  SpaceConfig space;
  space.dim = dim;
  return InclusionInstance{
      .name = std::move(name),
      .space = space,
      .A = SingleValuedMap::zero(dim),
      .B = SingleValuedMap::zero(dim),
      .C = SingleValuedMap::zero(dim),
      .D = SingleValuedMap::zero(dim),
      .f = SingleValuedMap::zero(dim),
      .g = SingleValuedMap::zero(dim),
      .H = BiSlotMapH::additive(),
      .F = PairMapF::zero(dim),
      .M = SetValuedMapM::f_minus_g(),
      .S = FiniteSetValuedMap::identity(dim),
      .T = FiniteSetValuedMap::identity(dim),
      .omega = Vector::zeros(dim),
      .rho = rho,
      .constants = {},
  };
}

CertificateExpectation expect(Property p, std::optional<double> constant, Source src,
                              std::string subject = {}, Verdict v = Verdict::pass) {
  return CertificateExpectation{p, std::move(subject), constant, v, src};
}

}  // namespace

NamedInstance example_3_2() {
  auto inst = base_instance("example_3_2", 2, 1.0);
  inst.A = SingleValuedMap::scaled_identity(2, 4.0);
  inst.B = SingleValuedMap::scaled_identity(2, -3.0);
  inst.C = SingleValuedMap::scaled_identity(2, 2.0);
  inst.D = SingleValuedMap::identity(2);
  inst.f = lin(mat2(5.0, -2.0 / 3.0, 2.0 / 3.0, 5.0));
  inst.g = lin(mat2(7.0 / 4.0, 3.0 / 4.0, -3.0 / 4.0, 7.0 / 4.0));

  auto& k = inst.constants;
  k.mu1 = 0.25;
  k.gamma1 = 2.0;
  k.mu2 = 1.0 / 3.0;
  k.gamma2 = 1.0;
  k.tau = 4.0;
  k.alpha = 5.0;
  k.beta = 1.75;
  k.alpha1 = 4.0;
  k.beta1 = 3.0;

  NamedInstance named{"example_3_2",
                      "H = A+B+C+D with scalar slots, M = f - g with rotation-scaled f, g",
                      std::move(inst),
                      {},
                      {}};
  named.certificates = {
      expect(Property::strongly_mixed_cocoercive, 2.0, Source::published),
      expect(Property::relaxed_mixed_cocoercive, 1.0, Source::published),
      expect(Property::mixed_lipschitz, 4.0, Source::published),
      expect(Property::strongly_accretive, 5.0, Source::published),
      expect(Property::relaxed_accretive, 1.75, Source::published),
      expect(Property::expansive, 4.0, Source::derived, "A"),
      expect(Property::lipschitz, 3.0, Source::derived, "B"),
      expect(Property::surjective_H_plus_rhoM, std::nullopt, Source::published),
  };
  return named;
}

NamedInstance example_3_3(std::size_t trunc_dim, std::size_t n_index) {
  if (trunc_dim == 0 || n_index < 1 || n_index > trunc_dim) {
    throw Error(ErrorCode::index_out_of_range,
                "example_3_3: need 1 <= n_index <= trunc_dim, got n_index=" +
                    std::to_string(n_index) + ", trunc_dim=" + std::to_string(trunc_dim));
  }
  const std::size_t k = trunc_dim;
  const Vector e = Vector::basis(k, n_index - 1);
  auto inst = base_instance("example_3_3", k, 1.0);
  inst.A = SingleValuedMap::affine(scaled(k, -5.0), -7.0 * e);
  inst.B = SingleValuedMap::affine(scaled(k, 5.0), 5.0 * e);
  inst.C = SingleValuedMap::scaled_identity(k, -3.0);
  inst.D = SingleValuedMap::affine(scaled(k, 2.0), 3.0 * e);
  inst.f = SingleValuedMap::scaled_identity(k, 2.0);
  inst.g = SingleValuedMap::affine(scaled(k, 1.0), -e);
  inst.constants.alpha = 2.0;
  inst.constants.beta = 1.0;

  NamedInstance named{"example_3_3",
                      "symmetric accretive M whose H + M composite collapses to the point 2 e_n",
                      std::move(inst),
                      {},
                      {}};
  named.certificates = {
      expect(Property::strongly_accretive, 2.0, Source::published),
      expect(Property::relaxed_accretive, 1.0, Source::published),
      expect(Property::surjective_H_plus_rhoM, std::nullopt, Source::published, {},
             Verdict::fail),
  };
  return named;
}

NamedInstance example_4_7() {
  auto inst = base_instance("example_4_7", 2, 0.35);
  inst.A = SingleValuedMap::scaled_identity(2, 0.1);
  inst.B = SingleValuedMap::scaled_identity(2, -0.2);
  inst.C = SingleValuedMap::scaled_identity(2, 2.0);
  inst.D = SingleValuedMap::identity(2);
  inst.f = lin(mat2(0.5, -4.0 / 3.0, 4.0 / 3.0, 0.5));
  inst.g = lin(mat2(0.25, -0.75, 0.75, 0.25));
  inst.F = PairMapF::affine(scaled(2, 0.25), scaled(2, 0.2), Vector::zeros(2));

  auto& k = inst.constants;
  k.l1 = 1.0;
  k.l2 = 1.0;
  k.mu1 = 10.0;
  k.gamma1 = 2.0;
  k.mu2 = 5.0;
  k.gamma2 = 1.0;
  k.alpha1 = 0.1;
  k.beta1 = 0.2;
  k.alpha = 0.5;
  k.beta = 0.25;
  k.sigma = 0.725;
  k.delta = 0.580;
  k.epsilon1 = 0.25;
  k.epsilon2 = 0.2;
  k.tau = 2.9;

  NamedInstance named{"example_4_7",
                      "full inclusion with F(x,y) = x/4 + y/5 and identity S, T",
                      std::move(inst),
                      {},
                      {}};
  named.certificates = {
      expect(Property::strongly_mixed_cocoercive, 2.0, Source::published),
      expect(Property::relaxed_mixed_cocoercive, 1.0, Source::published),
      expect(Property::expansive, 0.1, Source::published, "A"),
      expect(Property::lipschitz, 0.2, Source::derived, "B"),
      expect(Property::mixed_lipschitz, 2.9, Source::published),
      expect(Property::strongly_accretive, 0.5, Source::published),
      expect(Property::relaxed_accretive, 0.25, Source::published),
      expect(Property::F_strongly_accretive_first, 0.725, Source::published),
      expect(Property::F_strongly_accretive_second, 0.58, Source::published),
      expect(Property::F_lipschitz_first, 0.25, Source::published),
      expect(Property::F_lipschitz_second, 0.2, Source::published),
      expect(Property::d_lipschitz, 1.0, Source::published, "S"),
      expect(Property::d_lipschitz, 1.0, Source::published, "T"),
      expect(Property::surjective_H_plus_rhoM, std::nullopt, Source::published),
  };
  named.solver = {
      SolverExpectation{0.35, 0.2903215796870934, 1e-12, Vector::zeros(2), Source::derived},
  };
  return named;
}

NamedInstance reduction_scaled_n(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::invalid_argument, "reduction_scaled_n: lambda must be > 0");
  }
  auto inst = base_instance("reduction_scaled_n", 2, 0.2);
  const Matrix n = mat2(2.0, 1.0, -1.0, 2.0);
  inst.A = SingleValuedMap::identity(2);
  inst.f = lin(lambda * n);
  inst.F = PairMapF::affine(scaled(2, 0.3), scaled(2, 0.2), Vector::zeros(2));
  inst.T = FiniteSetValuedMap::branches({AffineRealization{scaled(2, 0.5), Vector::zeros(2)}});
  inst.omega = Vector{1.0, 1.0};
  auto& k = inst.constants;
  k.mu1 = 0.5;
  k.gamma1 = 0.5;
  k.alpha1 = 1.0;
  k.tau = 1.0;
  k.alpha = 2.0 * lambda;
  k.beta = 0.1;
  k.l1 = 1.0;
  k.l2 = 0.5;

  NamedInstance named{"reduction_scaled_n",
                      "omega in F(S(u),T(u)) + lambda N(u) with H = A = I",
                      std::move(inst),
                      {},
                      {}};
  named.certificates = {
      expect(Property::strongly_accretive, 2.0 * lambda, Source::derived),
      expect(Property::surjective_H_plus_rhoM, std::nullopt, Source::derived),
  };
  return named;
}

NamedInstance reduction_zero_in_t_plus_n() {
  auto inst = base_instance("reduction_zero_in_t_plus_n", 2, 0.5);
  inst.A = SingleValuedMap::identity(2);
  inst.f = lin(mat2(1.0, 0.3, -0.3, 1.0));
  inst.F = PairMapF::affine(scaled(2, 0.0), scaled(2, 1.0), Vector::zeros(2));
  inst.T = FiniteSetValuedMap::branches({AffineRealization{scaled(2, 0.5), Vector{1.0, -1.0}}});
  auto& k = inst.constants;
  k.mu1 = 0.5;
  k.gamma1 = 0.5;
  k.alpha1 = 1.0;
  k.tau = 1.0;
  k.alpha = 1.0;
  k.beta = 0.1;
  k.l1 = 1.0;
  k.l2 = 0.5;

  // u* = -(N + I/2)^{-1} b
  const Matrix shifted = mat2(1.5, 0.3, -0.3, 1.5);
  const Vector solution = Vector(Eigen::VectorXd(-shifted.inverse() * Eigen::Vector2d(1.0, -1.0)));

  NamedInstance named{"reduction_zero_in_t_plus_n",
                      "0 in T(u) + N(u): F(v,w) = w, M = N, H = I",
                      std::move(inst),
                      {},
                      {}};
  named.certificates = {
      expect(Property::strongly_accretive, 1.0, Source::trivial),
      expect(Property::d_lipschitz, 0.5, Source::trivial, "T"),
      expect(Property::surjective_H_plus_rhoM, std::nullopt, Source::trivial),
  };
  named.solver = {SolverExpectation{0.5, std::nullopt, 0.0, solution, Source::derived}};
  return named;
}

namespace {

NamedInstance reduction_h_ab() {
  auto inst = base_instance("reduction_h_ab", 2, 0.1);
  inst.A = SingleValuedMap::scaled_identity(2, 3.0);
  inst.B = SingleValuedMap::scaled_identity(2, 0.5);
  inst.f = SingleValuedMap::scaled_identity(2, 2.0);
  inst.g = SingleValuedMap::scaled_identity(2, 0.5);
  inst.F = PairMapF::affine(scaled(2, 0.2), scaled(2, 0.1), Vector::zeros(2));
  auto& k = inst.constants;
  k.mu1 = 0.2;
  k.gamma1 = 1.2;
  k.mu2 = 0.1;
  k.gamma2 = 0.525;
  k.alpha1 = 3.0;
  k.beta1 = 0.5;
  k.tau = 3.5;
  k.alpha = 2.0;
  k.beta = 0.5;
  k.sigma = 0.7;
  k.delta = 0.35;
  k.epsilon1 = 0.2;
  k.epsilon2 = 0.1;
  k.l1 = 1.0;
  k.l2 = 1.0;

  NamedInstance named{"reduction_h_ab", "H(A,B): the C and D slots are zero", std::move(inst),
                      {}, {}};
  named.certificates = {
      expect(Property::strongly_mixed_cocoercive, 1.2, Source::trivial),
      expect(Property::relaxed_mixed_cocoercive, 0.525, Source::trivial),
      expect(Property::mixed_lipschitz, 3.5, Source::trivial),
      expect(Property::surjective_H_plus_rhoM, std::nullopt, Source::trivial),
  };
  named.solver = {SolverExpectation{0.1, std::nullopt, 0.0, Vector::zeros(2), Source::trivial}};
  return named;
}

NamedInstance reduction_h_a() {
  auto inst = base_instance("reduction_h_a", 2, 1.0);
  inst.A = lin(mat2(2.0, 0.5, -0.5, 2.0));
  inst.f = SingleValuedMap::identity(2);
  auto& k = inst.constants;
  k.mu1 = 0.2;
  k.gamma1 = 1.15;
  k.alpha1 = 2.0;
  k.tau = 2.1;
  k.alpha = 1.0;
  k.beta = 0.1;

  NamedInstance named{"reduction_h_a", "H(.) = A alone: M reduces to H-accretive", std::move(inst),
                      {}, {}};
  named.certificates = {
      expect(Property::mixed_lipschitz, std::nullopt, Source::trivial),
      expect(Property::strongly_accretive, 1.0, Source::trivial),
      expect(Property::surjective_H_plus_rhoM, std::nullopt, Source::trivial),
  };
  return named;
}

NamedInstance reduction_h_b() {
  auto inst = base_instance("reduction_h_b", 2, 1.0);
  inst.B = SingleValuedMap::scaled_identity(2, 1.5);
  inst.f = lin(mat2(1.0, -1.0, 1.0, 1.0));
  auto& k = inst.constants;
  k.mu2 = 0.2;
  k.gamma2 = 1.95;
  k.beta1 = 1.5;
  k.tau = 1.5;
  k.alpha = 1.0;
  k.beta = 0.1;

  NamedInstance named{"reduction_h_b", "H = B alone", std::move(inst), {}, {}};
  named.certificates = {
      expect(Property::lipschitz, 1.5, Source::trivial, "B"),
      expect(Property::mixed_lipschitz, 1.5, Source::trivial),
      expect(Property::surjective_H_plus_rhoM, std::nullopt, Source::trivial),
  };
  return named;
}

}  // namespace

std::vector<NamedInstance> reduction_constructors() {
  std::vector<NamedInstance> out;
  out.push_back(reduction_h_ab());
  out.push_back(reduction_h_a());
  out.push_back(reduction_h_b());
  out.push_back(reduction_zero_in_t_plus_n());
  out.push_back(reduction_scaled_n(2.0));
  return out;
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> out{"example_3_2", "example_3_3", "example_4_7"};
  for (const auto& r : reduction_constructors()) out.push_back(r.name);
  return out;
}

std::optional<NamedInstance> builtin_instance(std::string_view name) {
  if (name == "example_3_2") return example_3_2();
  if (name == "example_3_3") return example_3_3();
  if (name == "example_4_7") return example_4_7();
  for (auto& r : reduction_constructors()) {
    if (r.name == name) return std::move(r);
  }
  return std::nullopt;
}

}  // namespace vincl
