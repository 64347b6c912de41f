#include "vincl/certify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "vincl/resolvent.hpp"

namespace vincl {

std::string_view to_string(Property p) {
  switch (p) {
    case Property::strongly_accretive: return "strongly_accretive";
    case Property::relaxed_accretive: return "relaxed_accretive";
    case Property::cocoercive: return "cocoercive";
    case Property::relaxed_cocoercive: return "relaxed_cocoercive";
    case Property::lipschitz: return "lipschitz";
    case Property::expansive: return "expansive";
    case Property::strongly_mixed_cocoercive: return "strongly_mixed_cocoercive";
    case Property::relaxed_mixed_cocoercive: return "relaxed_mixed_cocoercive";
    case Property::mixed_lipschitz: return "mixed_lipschitz";
    case Property::d_lipschitz: return "d_lipschitz";
    case Property::F_strongly_accretive_first: return "F_strongly_accretive_first";
    case Property::F_strongly_accretive_second: return "F_strongly_accretive_second";
    case Property::F_lipschitz_first: return "F_lipschitz_first";
    case Property::F_lipschitz_second: return "F_lipschitz_second";
    case Property::symmetric_accretive: return "symmetric_accretive";
    case Property::surjective_H_plus_rhoM: return "surjective_H_plus_rhoM";
    case Property::generalized_mixed_accretive: return "generalized_mixed_accretive";
  }
  return "unknown";
}

std::string_view to_string(Method m) {
  return m == Method::exact_affine ? "exact_affine" : "sampled";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::estimated: return "estimated";
  }
  return "unknown";
}

std::optional<double> Certificate::detail(std::string_view key) const {
  for (const auto& [k, v] : details) {
    if (k == key) return v;
  }
  return std::nullopt;
}

// Sample generation

namespace {

// Portable [0,1) draw: mt19937_64 is fully specified, the std distributions
// are not.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Vector random_vector(std::mt19937_64& rng, std::size_t dim, double scale) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = (2.0 * unit_uniform(rng) - 1.0) * scale;
  return Vector(v);
}

}  // namespace

std::vector<SamplePair> generate_pairs(const SamplePlan& plan, std::size_t dim) {
  std::vector<SamplePair> out;
  std::mt19937_64 rng(plan.seed);
  if (plan.include_lattice) {
    const Vector zero = Vector::zeros(dim);
    std::mt19937_64 aux_rng(plan.seed ^ 0x9e3779b97f4a7c15ULL);
    auto push = [&](Vector x, Vector y) {
      out.push_back({std::move(x), std::move(y), random_vector(aux_rng, dim, plan.scale)});
    };
    for (std::size_t i = 0; i < dim; ++i) {
      const Vector ei = Vector::basis(dim, i);
      push(ei, zero);
      push(zero, ei);
      push(ei, -ei);
      push(ei * 3.0, ei * -0.5);
      for (std::size_t j = i + 1; j < dim; ++j) {
        const Vector ej = Vector::basis(dim, j);
        push(ei, ej);
        push(ei + ej, zero);
        push(ei - ej, zero);
        push((ei + ej) * 2.5, ei * -1.0);
      }
    }
  }
  for (std::size_t k = 0; k < plan.pairs; ++k) {
    Vector x = random_vector(rng, dim, plan.scale);
    Vector y = random_vector(rng, dim, plan.scale);
    Vector aux = random_vector(rng, dim, plan.scale);
    out.push_back({std::move(x), std::move(y), std::move(aux)});
  }
  return out;
}

// Exact linear-algebra helpers

namespace {

struct Extreme {
  double value;
  Eigen::VectorXd direction;
};

Extreme min_symmetric_eigen(const Matrix& m) {
  const Matrix s = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

Extreme max_singular(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  return {svd.singularValues()(0), svd.matrixV().col(0)};
}

Extreme min_singular(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Eigen::Index last = svd.singularValues().size() - 1;
  return {svd.singularValues()(last), svd.matrixV().col(last)};
}

std::optional<Matrix> inverse_if_regular(const Matrix& m) {
  Eigen::FullPivLU<Matrix> lu(m);
  if (!lu.isInvertible()) return std::nullopt;
  const Extreme lo = min_singular(m);
  const Extreme hi = max_singular(m);
  if (hi.value == 0.0 || lo.value / hi.value < 1.0 / kSingularConditionNumber) return std::nullopt;
  return lu.inverse();
}

double qpow(double base, double q) { return q == 2.0 ? base * base : std::pow(base, q); }

Certificate start(Property property, std::string subject, std::optional<double> claimed,
                  Method method) {
  Certificate c;
  c.property = property;
  c.subject = std::move(subject);
  c.claimed = claimed;
  c.method = method;
  return c;
}

Witness direction_witness(const Eigen::VectorXd& d, double lhs, double rhs,
                          const std::string& summary) {
  Witness w;
  w.summary = summary;
  w.x = Vector(d);
  w.y = Vector::zeros(static_cast<std::size_t>(d.size()));
  w.lhs = lhs;
  w.rhs = rhs;
  return w;
}

void require_positive_claim(std::string_view what, double claimed) {
  if (!(claimed > 0.0) || !std::isfinite(claimed)) {
    throw Error(ErrorCode::invalid_argument,
                std::string(what) + ": claimed constant must be > 0, got " + std::to_string(claimed));
  }
}

void require_samples(std::string_view what, const SamplePlan& plan) {
  if (plan.empty()) {
    throw Error(ErrorCode::insufficient_evidence,
                std::string(what) + ": no affine realization and an empty sample plan");
  }
}

void require_constants(const InclusionInstance& inst, std::string_view what,
                       std::initializer_list<std::string_view> names) {
  const auto missing = inst.constants.missing(names);
  if (missing.empty()) return;
  std::string list;
  for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
  throw Error(ErrorCode::missing_constants, std::string(what) + ": missing constants: " + list);
}

/// Accumulates a sampled inequality check.
///
/// `lower_bound`: the inequality is lhs >= rhs (otherwise lhs <= rhs).
/// `estimate_is_min`: the best constant is the minimum of the per-pair
/// estimates (otherwise the maximum).
class SampledCheck {
public:
  SampledCheck(bool lower_bound, bool estimate_is_min)
      : lower_bound_(lower_bound),
        estimate_is_min_(estimate_is_min),
        best_(estimate_is_min ? std::numeric_limits<double>::infinity()
                              : -std::numeric_limits<double>::infinity()) {}

  void observe(const Vector& x, const Vector& y, double lhs, double rhs, double estimate) {
    ++checked_;
    const bool tighter = estimate_is_min_ ? estimate < best_ : estimate > best_;
    if (tighter) {
      best_ = estimate;
      tightest_ = Witness{"tightest sampled pair", x, y, lhs, rhs};
    }
    const double excess = lower_bound_ ? rhs - lhs : lhs - rhs;
    const double slack = kInequalitySlack * (1.0 + std::abs(rhs));
    if (excess > slack && excess > worst_excess_) {
      worst_excess_ = excess;
      violation_ = Witness{"inequality violated by " + std::to_string(excess), x, y, lhs, rhs};
    }
  }

  void finish(Certificate& c, const SamplePlan& plan) const {
    c.samples_checked = checked_;
    c.seed = plan.seed;
    c.constant = checked_ > 0 ? best_ : std::numeric_limits<double>::quiet_NaN();
    if (violation_) {
      c.verdict = Verdict::fail;
      c.witness = *violation_;
    } else {
      c.verdict = Verdict::estimated;
      if (tightest_) c.witness = *tightest_;
    }
  }

private:
  bool lower_bound_;
  bool estimate_is_min_;
  double best_;
  double worst_excess_ = 0.0;
  std::size_t checked_ = 0;
  std::optional<Witness> tightest_;
  std::optional<Witness> violation_;
};

bool use_exact(const SamplePlan& plan) { return !plan.force_sampled; }

void finish_exact_lower(Certificate& c, double constant, double claimed,
                        const Eigen::VectorXd& direction, const std::string& what) {
  c.constant = constant;
  if (constant >= claimed - kInequalitySlack) {
    c.verdict = Verdict::pass;
    c.witness.summary = what;
  } else {
    c.verdict = Verdict::fail;
    c.witness = direction_witness(direction, constant, claimed,
                                  what + "; claimed " + std::to_string(claimed) +
                                      " exceeds the exact constant along the witness direction");
  }
}

void finish_exact_upper(Certificate& c, double constant, double claimed,
                        const Eigen::VectorXd& direction, const std::string& what) {
  c.constant = constant;
  if (constant <= claimed + kInequalitySlack) {
    c.verdict = Verdict::pass;
    c.witness.summary = what;
  } else {
    c.verdict = Verdict::fail;
    c.witness = direction_witness(direction, constant, claimed,
                                  what + "; exact constant exceeds claimed " +
                                      std::to_string(claimed) + " along the witness direction");
  }
}

}  // namespace

// Single-map properties

Certificate certify_strong_accretive(const SingleValuedMap& map, double claimed, double q,
                                     const SamplePlan& samples) {
  require_positive_claim("certify_strong_accretive", claimed);
  if (map.is_affine() && q == 2.0 && use_exact(samples)) {
    auto c = start(Property::strongly_accretive, "map", claimed, Method::exact_affine);
    const auto e = min_symmetric_eigen(map.affine()->linear);
    finish_exact_lower(c, e.value, claimed, e.direction,
                       "smallest eigenvalue of the symmetric part");
    return c;
  }
  require_samples("certify_strong_accretive", samples);
  auto c = start(Property::strongly_accretive, "map", claimed, Method::sampled);
  SampledCheck check(true, true);
  for (const auto& p : generate_pairs(samples, map.dim())) {
    const Vector d = p.x - p.y;
    const double nd = norm(d);
    if (nd == 0.0) continue;
    const double lhs = inner(map(p.x) - map(p.y), duality_map(d, q));
    const double scale = qpow(nd, q);
    check.observe(p.x, p.y, lhs, claimed * scale, lhs / scale);
  }
  check.finish(c, samples);
  return c;
}

Certificate certify_relaxed_accretive(const SingleValuedMap& map, double claimed, double q,
                                      const SamplePlan& samples) {
  require_positive_claim("certify_relaxed_accretive", claimed);
  if (map.is_affine() && q == 2.0 && use_exact(samples)) {
    auto c = start(Property::relaxed_accretive, "map", claimed, Method::exact_affine);
    const auto e = min_symmetric_eigen(map.affine()->linear);
    finish_exact_upper(c, std::max(0.0, -e.value), claimed, e.direction,
                       "negated smallest eigenvalue of the symmetric part");
    return c;
  }
  require_samples("certify_relaxed_accretive", samples);
  auto c = start(Property::relaxed_accretive, "map", claimed, Method::sampled);
  SampledCheck check(true, false);
  for (const auto& p : generate_pairs(samples, map.dim())) {
    const Vector d = p.x - p.y;
    const double nd = norm(d);
    if (nd == 0.0) continue;
    const double lhs = inner(map(p.x) - map(p.y), duality_map(d, q));
    const double scale = qpow(nd, q);
    check.observe(p.x, p.y, lhs, -claimed * scale, std::max(0.0, -lhs / scale));
  }
  check.finish(c, samples);
  return c;
}

namespace {

// <Ld, d> >= mu ||Ld||^2 for all d  <=>  mu <= lambda_min(sym(L^{-1})) when L
// is invertible (substitute e = L d).
std::optional<Extreme> exact_cocoercivity(const SingleValuedMap& map) {
  const auto inv = inverse_if_regular(map.affine()->linear);
  if (!inv) return std::nullopt;
  auto e = min_symmetric_eigen(*inv);
  e.direction = *inv * e.direction;  // back to the domain of the map
  return e;
}

Certificate cocoercive_impl(const SingleValuedMap& map, double claimed, double q,
                            const SamplePlan& samples, bool relaxed) {
  const Property prop = relaxed ? Property::relaxed_cocoercive : Property::cocoercive;
  require_positive_claim(to_string(prop), claimed);
  if (map.is_affine() && q == 2.0 && use_exact(samples)) {
    if (auto e = exact_cocoercivity(map)) {
      auto c = start(prop, "map", claimed, Method::exact_affine);
      if (relaxed) {
        finish_exact_upper(c, std::max(0.0, -e->value), claimed, e->direction,
                           "negated smallest eigenvalue of sym(L^{-1})");
      } else {
        finish_exact_lower(c, e->value, claimed, e->direction,
                           "smallest eigenvalue of sym(L^{-1})");
      }
      return c;
    }
  }
  require_samples(to_string(prop), samples);
  auto c = start(prop, "map", claimed, Method::sampled);
  SampledCheck check(true, !relaxed);
  for (const auto& p : generate_pairs(samples, map.dim())) {
    const Vector d = p.x - p.y;
    const Vector dm = map(p.x) - map(p.y);
    const double nd = norm(d);
    const double ndm = norm(dm);
    if (nd == 0.0 || ndm == 0.0) continue;
    const double lhs = inner(dm, duality_map(d, q));
    const double scale = qpow(ndm, q);
    if (relaxed) {
      check.observe(p.x, p.y, lhs, -claimed * scale, std::max(0.0, -lhs / scale));
    } else {
      check.observe(p.x, p.y, lhs, claimed * scale, lhs / scale);
    }
  }
  check.finish(c, samples);
  return c;
}

}  // namespace

Certificate certify_cocoercive(const SingleValuedMap& map, double claimed, double q,
                               const SamplePlan& samples) {
  return cocoercive_impl(map, claimed, q, samples, false);
}

Certificate certify_relaxed_cocoercive(const SingleValuedMap& map, double claimed, double q,
                                       const SamplePlan& samples) {
  return cocoercive_impl(map, claimed, q, samples, true);
}

Certificate certify_lipschitz(const SingleValuedMap& map, double claimed,
                              const SamplePlan& samples) {
  require_positive_claim("certify_lipschitz", claimed);
  if (map.is_affine() && use_exact(samples)) {
    auto c = start(Property::lipschitz, "map", claimed, Method::exact_affine);
    const auto e = max_singular(map.affine()->linear);
    finish_exact_upper(c, e.value, claimed, e.direction, "largest singular value");
    return c;
  }
  require_samples("certify_lipschitz", samples);
  auto c = start(Property::lipschitz, "map", claimed, Method::sampled);
  SampledCheck check(false, false);
  for (const auto& p : generate_pairs(samples, map.dim())) {
    const double nd = distance(p.x, p.y);
    if (nd == 0.0) continue;
    const double lhs = distance(map(p.x), map(p.y));
    check.observe(p.x, p.y, lhs, claimed * nd, lhs / nd);
  }
  check.finish(c, samples);
  return c;
}

Certificate certify_expansive(const SingleValuedMap& map, double claimed,
                              const SamplePlan& samples) {
  require_positive_claim("certify_expansive", claimed);
  if (map.is_affine() && use_exact(samples)) {
    auto c = start(Property::expansive, "map", claimed, Method::exact_affine);
    const auto e = min_singular(map.affine()->linear);
    finish_exact_lower(c, e.value, claimed, e.direction, "smallest singular value");
    return c;
  }
  require_samples("certify_expansive", samples);
  auto c = start(Property::expansive, "map", claimed, Method::sampled);
  SampledCheck check(true, true);
  for (const auto& p : generate_pairs(samples, map.dim())) {
    const double nd = distance(p.x, p.y);
    if (nd == 0.0) continue;
    const double lhs = distance(map(p.x), map(p.y));
    check.observe(p.x, p.y, lhs, claimed * nd, lhs / nd);
  }
  check.finish(c, samples);
  return c;
}

Certificate certify_d_lipschitz(const FiniteSetValuedMap& map, double claimed,
                                const SamplePlan& samples) {
  require_positive_claim("certify_d_lipschitz", claimed);
  if (auto single = map.single_affine(); single && use_exact(samples)) {
    auto c = start(Property::d_lipschitz, "map", claimed, Method::exact_affine);
    const auto e = max_singular(single->linear);
    finish_exact_upper(c, e.value, claimed, e.direction,
                       "single-valued affine map: largest singular value");
    return c;
  }
  require_samples("certify_d_lipschitz", samples);
  auto c = start(Property::d_lipschitz, "map", claimed, Method::sampled);
  SampledCheck check(false, false);
  for (const auto& p : generate_pairs(samples, map.dim())) {
    const double nd = distance(p.x, p.y);
    if (nd == 0.0) continue;
    const double lhs = hausdorff_distance(map(p.x), map(p.y));
    check.observe(p.x, p.y, lhs, claimed * nd, lhs / nd);
  }
  check.finish(c, samples);
  return c;
}

// Instance-level properties

namespace {

struct SlotLinears {
  Matrix a, b, c, d;
};

std::optional<SlotLinears> slot_linears(const InclusionInstance& inst) {
  if (!inst.H.is_additive()) return std::nullopt;
  for (const auto* m : {&inst.A, &inst.B, &inst.C, &inst.D}) {
    if (!m->is_affine()) return std::nullopt;
  }
  return SlotLinears{inst.A.affine()->linear, inst.B.affine()->linear, inst.C.affine()->linear,
                     inst.D.affine()->linear};
}

}  // namespace

std::pair<Certificate, Certificate> certify_symmetric_mixed_cocoercive(
    const InclusionInstance& inst, const SamplePlan& samples) {
  require_constants(inst, "certify_symmetric_mixed_cocoercive", {"mu1", "gamma1", "mu2", "gamma2"});
  const auto& k = inst.constants;
  const double mu1 = *k.mu1, gamma1 = *k.gamma1, mu2 = *k.mu2, gamma2 = *k.gamma2;
  const double q = inst.space.q;

  if (auto lin = slot_linears(inst); lin && q == 2.0 && use_exact(samples)) {
    auto first = start(Property::strongly_mixed_cocoercive, "H w.r.t. (A,C)", gamma1,
                       Method::exact_affine);
    const Matrix s1 = 0.5 * ((lin->a + lin->c) + (lin->a + lin->c).transpose()) -
                      mu1 * lin->a.transpose() * lin->a;
    const auto e1 = min_symmetric_eigen(s1);
    finish_exact_lower(first, e1.value, gamma1, e1.direction,
                       "smallest eigenvalue of sym(A+C) - mu1 A^T A");
    first.details.emplace_back("mu", mu1);

    auto second = start(Property::relaxed_mixed_cocoercive, "H w.r.t. (B,D)", gamma2,
                        Method::exact_affine);
    const Matrix s2 = 0.5 * ((lin->b + lin->d) + (lin->b + lin->d).transpose()) +
                      mu2 * lin->b.transpose() * lin->b;
    const auto e2 = min_symmetric_eigen(s2);
    finish_exact_lower(second, e2.value, gamma2, e2.direction,
                       "smallest eigenvalue of sym(B+D) + mu2 B^T B");
    second.details.emplace_back("mu", mu2);
    return {first, second};
  }

  require_samples("certify_symmetric_mixed_cocoercive", samples);
  auto first = start(Property::strongly_mixed_cocoercive, "H w.r.t. (A,C)", gamma1, Method::sampled);
  auto second = start(Property::relaxed_mixed_cocoercive, "H w.r.t. (B,D)", gamma2, Method::sampled);
  SampledCheck c1(true, true), c2(true, true);
  for (const auto& p : generate_pairs(samples, inst.dim())) {
    const Vector d = p.x - p.y;
    const double nd = norm(d);
    if (nd == 0.0) continue;
    const Vector jd = duality_map(d, q);
    const double scale = qpow(nd, q);
    const Vector& u = p.aux;

    const Vector ax = inst.A(p.x), ay = inst.A(p.y);
    const double lhs1 = inner(inst.H(ax, u, inst.C(p.x), u) - inst.H(ay, u, inst.C(p.y), u), jd);
    const double da = qpow(distance(ax, ay), q);
    c1.observe(p.x, p.y, lhs1, mu1 * da + gamma1 * scale, (lhs1 - mu1 * da) / scale);

    const Vector bx = inst.B(p.x), by = inst.B(p.y);
    const double lhs2 = inner(inst.H(u, bx, u, inst.D(p.x)) - inst.H(u, by, u, inst.D(p.y)), jd);
    const double db = qpow(distance(bx, by), q);
    c2.observe(p.x, p.y, lhs2, -mu2 * db + gamma2 * scale, (lhs2 + mu2 * db) / scale);
  }
  c1.finish(first, samples);
  c2.finish(second, samples);
  first.details.emplace_back("mu", mu1);
  second.details.emplace_back("mu", mu2);
  return {first, second};
}

Certificate certify_mixed_lipschitz(const InclusionInstance& inst, double claimed,
                                    const SamplePlan& samples) {
  require_positive_claim("certify_mixed_lipschitz", claimed);
  if (auto lin = slot_linears(inst); lin && use_exact(samples)) {
    auto c = start(Property::mixed_lipschitz, "H((A,B),(C,D))", claimed, Method::exact_affine);
    const auto e = max_singular(lin->a + lin->b + lin->c + lin->d);
    finish_exact_upper(c, e.value, claimed, e.direction,
                       "operator 2-norm of the composite A+B+C+D");
    return c;
  }
  require_samples("certify_mixed_lipschitz", samples);
  auto c = start(Property::mixed_lipschitz, "H((A,B),(C,D))", claimed, Method::sampled);
  SampledCheck check(false, false);
  for (const auto& p : generate_pairs(samples, inst.dim())) {
    const double nd = distance(p.x, p.y);
    if (nd == 0.0) continue;
    const double lhs = distance(eval_H_on_point(inst, p.x), eval_H_on_point(inst, p.y));
    check.observe(p.x, p.y, lhs, claimed * nd, lhs / nd);
  }
  check.finish(c, samples);
  return c;
}

namespace {

// sigma (first = true) or delta: <F(s1,.)-F(s2,.), J_q(H(u)-H(v))> against
// ||u-v||^q, with s_i ranging over the selections of S (or T).
Certificate F_accretive(const InclusionInstance& inst, bool first, double claimed,
                        const SamplePlan& samples) {
  const Property prop =
      first ? Property::F_strongly_accretive_first : Property::F_strongly_accretive_second;
  const std::string subject = first ? "F w.r.t. S and H" : "F w.r.t. T and H";
  const FiniteSetValuedMap& sel = first ? inst.S : inst.T;
  const double q = inst.space.q;

  const auto lin = slot_linears(inst);
  const auto sel_affine = sel.single_affine();
  if (lin && sel_affine && inst.F.affine() && q == 2.0 && use_exact(samples)) {
    auto c = start(prop, subject, claimed, Method::exact_affine);
    const Matrix k = lin->a + lin->b + lin->c + lin->d;
    const Matrix& p = first ? inst.F.affine()->first : inst.F.affine()->second;
    const Matrix ps = p * sel_affine->linear;
    // <P S d, K d> = d^T (PS)^T K d
    const auto e = min_symmetric_eigen(k.transpose() * ps);
    finish_exact_lower(c, e.value, claimed, e.direction,
                       "smallest eigenvalue of sym(K^T P S), normalized by ||x-y||^2");
    if (auto kinv = inverse_if_regular(k)) {
      const auto eh = min_symmetric_eigen(ps * *kinv);
      c.details.emplace_back("h_normalized_constant", eh.value);
      c.details.emplace_back("h_normalized_holds",
                             eh.value >= claimed - kInequalitySlack ? 1.0 : 0.0);
    }
    return c;
  }

  require_samples(to_string(prop), samples);
  auto c = start(prop, subject, claimed, Method::sampled);
  SampledCheck check(true, true);
  double h_best = std::numeric_limits<double>::infinity();
  for (const auto& pr : generate_pairs(samples, inst.dim())) {
    const Vector d = pr.x - pr.y;
    const double nd = norm(d);
    if (nd == 0.0) continue;
    const Vector dh = eval_H_on_point(inst, pr.x) - eval_H_on_point(inst, pr.y);
    const Vector jdh = duality_map(dh, q);
    const double scale = qpow(nd, q);
    const double hscale = qpow(norm(dh), q);
    for (const auto& s1 : sel(pr.x)) {
      for (const auto& s2 : sel(pr.y)) {
        const Vector df = first ? inst.F(s1, pr.aux) - inst.F(s2, pr.aux)
                                : inst.F(pr.aux, s1) - inst.F(pr.aux, s2);
        const double lhs = inner(df, jdh);
        check.observe(pr.x, pr.y, lhs, claimed * scale, lhs / scale);
        if (hscale > 0.0) h_best = std::min(h_best, lhs / hscale);
      }
    }
  }
  check.finish(c, samples);
  if (std::isfinite(h_best)) c.details.emplace_back("h_normalized_constant", h_best);
  return c;
}

Certificate F_lipschitz(const InclusionInstance& inst, bool first, double claimed,
                        const SamplePlan& samples) {
  const Property prop = first ? Property::F_lipschitz_first : Property::F_lipschitz_second;
  const std::string subject = first ? "F (first argument)" : "F (second argument)";
  if (inst.F.affine() && use_exact(samples)) {
    auto c = start(prop, subject, claimed, Method::exact_affine);
    const auto e = max_singular(first ? inst.F.affine()->first : inst.F.affine()->second);
    finish_exact_upper(c, e.value, claimed, e.direction, "largest singular value");
    return c;
  }
  require_samples(to_string(prop), samples);
  auto c = start(prop, subject, claimed, Method::sampled);
  SampledCheck check(false, false);
  for (const auto& p : generate_pairs(samples, inst.dim())) {
    const double nd = distance(p.x, p.y);
    if (nd == 0.0) continue;
    const double lhs = first ? distance(inst.F(p.x, p.aux), inst.F(p.y, p.aux))
                             : distance(inst.F(p.aux, p.x), inst.F(p.aux, p.y));
    check.observe(p.x, p.y, lhs, claimed * nd, lhs / nd);
  }
  check.finish(c, samples);
  return c;
}

}  // namespace

std::vector<Certificate> certify_F_properties(const InclusionInstance& inst,
                                              const SamplePlan& samples) {
  require_constants(inst, "certify_F_properties", {"sigma", "delta", "epsilon1", "epsilon2"});
  const auto& k = inst.constants;
  for (const auto& [name, v] : {std::pair{"sigma", *k.sigma}, std::pair{"delta", *k.delta},
                                std::pair{"epsilon1", *k.epsilon1},
                                std::pair{"epsilon2", *k.epsilon2}}) {
    require_positive_claim(name, v);
  }
  return {F_accretive(inst, true, *k.sigma, samples), F_accretive(inst, false, *k.delta, samples),
          F_lipschitz(inst, true, *k.epsilon1, samples),
          F_lipschitz(inst, false, *k.epsilon2, samples)};
}

SingleValuedMap m_f_slot_map(const InclusionInstance& inst, const Vector& w) {
  if (inst.M.is_f_minus_g() && inst.f.is_affine()) {
    const auto& f = *inst.f.affine();
    return SingleValuedMap::affine(f.linear, f.offset - w);
  }
  const InclusionInstance* p = &inst;
  return SingleValuedMap::from_function(inst.dim(), [p, w](const Vector& x) {
    return p->M(p->f(x), w).front();
  });
}

SingleValuedMap m_g_slot_map(const InclusionInstance& inst, const Vector& w) {
  if (inst.M.is_f_minus_g() && inst.g.is_affine()) {
    const auto& g = *inst.g.affine();
    return SingleValuedMap::affine(-g.linear, w - g.offset);
  }
  const InclusionInstance* p = &inst;
  return SingleValuedMap::from_function(inst.dim(), [p, w](const Vector& x) {
    return p->M(w, p->g(x)).front();
  });
}

SymmetricAccretiveResult certify_symmetric_accretive(const InclusionInstance& inst,
                                                     const SamplePlan& samples) {
  require_constants(inst, "certify_symmetric_accretive", {"alpha", "beta"});
  const double alpha = *inst.constants.alpha;
  const double beta = *inst.constants.beta;
  const double q = inst.space.q;
  const Vector zero = Vector::zeros(inst.dim());

  SymmetricAccretiveResult out;
  const bool exact = inst.M.is_f_minus_g() && inst.f.is_affine() && inst.g.is_affine() &&
                     q == 2.0 && use_exact(samples);
  if (exact) {
    out.alpha = certify_strong_accretive(m_f_slot_map(inst, zero), alpha, q, samples);
    out.beta = certify_relaxed_accretive(m_g_slot_map(inst, zero), beta, q, samples);
  } else {
    require_positive_claim("alpha", alpha);
    require_positive_claim("beta", beta);
    require_samples("certify_symmetric_accretive", samples);
    out.alpha = start(Property::strongly_accretive, "", alpha, Method::sampled);
    out.beta = start(Property::relaxed_accretive, "", beta, Method::sampled);
    SampledCheck ca(true, true), cb(true, false);
    for (const auto& p : generate_pairs(samples, inst.dim())) {
      const Vector d = p.x - p.y;
      const double nd = norm(d);
      if (nd == 0.0) continue;
      const Vector jd = duality_map(d, q);
      const double scale = qpow(nd, q);
      for (const auto& u : inst.M(inst.f(p.x), p.aux)) {
        for (const auto& v : inst.M(inst.f(p.y), p.aux)) {
          const double lhs = inner(u - v, jd);
          ca.observe(p.x, p.y, lhs, alpha * scale, lhs / scale);
        }
      }
      for (const auto& u : inst.M(p.aux, inst.g(p.x))) {
        for (const auto& v : inst.M(p.aux, inst.g(p.y))) {
          const double lhs = inner(u - v, jd);
          cb.observe(p.x, p.y, lhs, -beta * scale, std::max(0.0, -lhs / scale));
        }
      }
    }
    ca.finish(out.alpha, samples);
    cb.finish(out.beta, samples);
  }
  out.alpha.subject = "M(f,.) through f";
  out.beta.subject = "M(.,g) through g";

  auto& c = out.combined;
  c = start(Property::symmetric_accretive, "M(f,g)", std::nullopt, out.alpha.method);
  c.constant = out.alpha.constant - out.beta.constant;
  c.details = {{"alpha", out.alpha.constant}, {"beta", out.beta.constant}};
  c.seed = out.alpha.seed;
  c.samples_checked = out.alpha.samples_checked;
  if (!out.alpha.ok() || !out.beta.ok()) {
    c.verdict = Verdict::fail;
    c.witness = !out.alpha.ok() ? out.alpha.witness : out.beta.witness;
  } else if (alpha < beta || out.alpha.constant < out.beta.constant - kInequalitySlack) {
    c.verdict = Verdict::fail;
    c.witness.summary = "alpha < beta";
  } else {
    c.verdict = (out.alpha.verdict == Verdict::pass && out.beta.verdict == Verdict::pass)
                    ? Verdict::pass
                    : Verdict::estimated;
    c.witness.summary = "alpha-strongly accretive through f, beta-relaxed accretive through g";
  }
  return out;
}

std::vector<double> default_rho_grid(const InclusionInstance& inst) {
  std::set<double> grid{0.01, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0};
  grid.insert(inst.rho);
  return {grid.begin(), grid.end()};
}

namespace {

std::string rho_label(double rho) {
  std::ostringstream os;
  os << rho;
  return os.str();
}

// Real roots rho > 0 of det(K + rho N), from the generalized eigenvalues of
// the pencil (K, -N).
std::vector<double> critical_rhos(const CompositeAffine& comp) {
  std::vector<double> out;
  Eigen::GeneralizedEigenSolver<Matrix> ges(comp.h_linear, -comp.m_linear, false);
  if (ges.info() != Eigen::Success) return out;
  const auto alphas = ges.alphas();
  const auto betas = ges.betas();
  const double scale = std::max(1.0, comp.h_linear.norm() + comp.m_linear.norm());
  for (Eigen::Index i = 0; i < alphas.size(); ++i) {
    if (std::abs(betas[i]) <= 1e-14 * scale) continue;
    const std::complex<double> lambda = alphas[i] / betas[i];
    if (std::abs(lambda.imag()) > 1e-9 * (1.0 + std::abs(lambda))) continue;
    const double rho = lambda.real();
    if (!(rho > 0.0) || !std::isfinite(rho)) continue;
    const auto a = analyze_composite(comp, rho);
    if (a.sigma_max == 0.0 || a.sigma_min / a.sigma_max < 1e-8) out.push_back(rho);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) <= 1e-9 * (1.0 + a); }),
            out.end());
  return out;
}

}  // namespace

Certificate certify_surjectivity(const InclusionInstance& inst, const std::vector<double>& rho_grid,
                                 const SamplePlan& samples) {
  for (double rho : rho_grid) {
    if (!(rho > 0.0)) throw Error(ErrorCode::invalid_argument, "rho grid entries must be > 0");
  }
  const auto comp = composite_affine(inst);
  if (comp && use_exact(samples)) {
    auto c = start(Property::surjective_H_plus_rhoM, "H + rho M(f,g)", std::nullopt,
                   Method::exact_affine);
    double min_sigma = std::numeric_limits<double>::infinity();
    for (double rho : rho_grid) {
      const auto a = analyze_composite(*comp, rho);
      min_sigma = std::min(min_sigma, a.sigma_min);
      c.details.emplace_back("condition_number@rho=" + rho_label(rho), a.condition_number);
      if (a.singular && c.verdict != Verdict::fail) {
        c.verdict = Verdict::fail;
        c.witness.summary = "rho=" + rho_label(rho) + ": " + a.defect;
        if (a.image_norm) {
          c.witness.x = a.offset;
          c.witness.lhs = *a.image_norm;
          c.details.emplace_back("image_norm", *a.image_norm);
        }
        c.details.emplace_back("failing_rho", rho);
      }
    }
    const auto critical = critical_rhos(*comp);
    for (double rho : critical) c.details.emplace_back("critical_rho", rho);
    if (c.verdict != Verdict::fail && !critical.empty()) {
      c.verdict = Verdict::fail;
      c.witness.summary = "det(H + rho M) vanishes at rho=" + rho_label(critical.front()) +
                          ": " + analyze_composite(*comp, critical.front()).defect;
    }
    c.constant = min_sigma;
    if (c.verdict != Verdict::fail) {
      c.verdict = Verdict::pass;
      c.witness.summary = "composite invertible on the grid; no real root rho > 0 of det(K + rho N)";
    }
    return c;
  }

  // Black-box: probe the range with the damped fixed-point resolvent.
  require_samples("certify_surjectivity", samples);
  auto c = start(Property::surjective_H_plus_rhoM, "H + rho M(f,g)", std::nullopt,
                 Method::sampled);
  c.seed = samples.seed;
  const auto pairs = generate_pairs(samples, inst.dim());
  const std::size_t probes = std::min<std::size_t>(16, pairs.size());
  c.verdict = Verdict::estimated;
  c.witness.summary = "every probed target reached on the grid";
  double worst = 0.0;
  for (double rho : rho_grid) {
    ResolventConfig cfg;
    cfg.rho = rho;
    cfg.solver = ResolventSolver::damped_fixed_point;
    cfg.inner_tol = 1e-10;
    Resolvent r(inst, cfg);
    for (std::size_t i = 0; i < probes; ++i) {
      const Vector& z = pairs[i].x;
      try {
        const Vector x = r(z);
        worst = std::max(worst, distance(forward(inst, rho, x, z), z));
        ++c.samples_checked;
      } catch (const ConvergenceError& e) {
        c.verdict = Verdict::fail;
        c.witness.summary = "rho=" + rho_label(rho) + ": target not reached (" + e.what() + ")";
        c.witness.x = z;
        c.witness.lhs = e.last_residual();
        c.constant = worst;
        return c;
      }
    }
  }
  c.constant = worst;
  return c;
}

Certificate certify_generalized_mixed_accretive(const InclusionInstance& inst,
                                                const std::vector<double>& rho_grid,
                                                const SamplePlan& samples) {
  const auto sym = certify_symmetric_accretive(inst, samples);
  const auto surj = certify_surjectivity(inst, rho_grid, samples);

  auto c = start(Property::generalized_mixed_accretive, "M", std::nullopt,
                 (sym.combined.method == Method::exact_affine && surj.method == Method::exact_affine)
                     ? Method::exact_affine
                     : Method::sampled);
  c.constant = sym.combined.constant;
  c.seed = samples.seed;
  c.details = {{"alpha", sym.alpha.constant},
               {"beta", sym.beta.constant},
               {"symmetric_accretive_ok", sym.combined.ok() ? 1.0 : 0.0},
               {"surjective_ok", surj.ok() ? 1.0 : 0.0},
               {"min_singular_value", surj.constant}};
  if (auto n = surj.detail("image_norm")) c.details.emplace_back("image_norm", *n);
  if (!surj.ok()) {
    c.verdict = Verdict::fail;
    c.witness = surj.witness;
  } else if (!sym.combined.ok()) {
    c.verdict = Verdict::fail;
    c.witness = sym.combined.witness;
  } else if (sym.combined.verdict == Verdict::pass && surj.verdict == Verdict::pass) {
    c.verdict = Verdict::pass;
    c.witness.summary = "symmetric accretive and H + rho M onto for every rho checked";
  } else {
    c.verdict = Verdict::estimated;
    c.witness.summary = "not contradicted by samples";
  }
  return c;
}

// Bundles

bool CertificateBundle::all_ok() const {
  return std::all_of(certificates.begin(), certificates.end(),
                     [](const Certificate& c) { return c.ok(); });
}

CertificateBundle certify_instance(const InclusionInstance& inst, const SamplePlan& samples,
                                   const std::vector<double>& rho_grid) {
  inst.validate();
  CertificateBundle b;
  b.instance = inst.name;
  b.seed = samples.seed;
  b.ordering_violations = inst.ordering_violations();
  const auto& k = inst.constants;
  const double q = inst.space.q;

  auto skip = [&](std::string_view what, const std::vector<std::string>& missing) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    b.skipped.push_back(std::string(what) + " (undeclared: " + list + ")");
  };
  auto subject = [](Certificate c, std::string s) {
    c.subject = std::move(s);
    return c;
  };

  if (auto miss = k.missing({"mu1", "gamma1", "mu2", "gamma2"}); miss.empty()) {
    auto [first, second] = certify_symmetric_mixed_cocoercive(inst, samples);
    b.certificates.push_back(std::move(first));
    b.certificates.push_back(std::move(second));
  } else {
    skip("symmetric mixed cocoercivity of H", miss);
  }
  if (k.alpha1) {
    b.certificates.push_back(subject(certify_expansive(inst.A, *k.alpha1, samples), "A"));
  } else {
    skip("expansiveness of A", {"alpha1"});
  }
  if (k.beta1) {
    b.certificates.push_back(subject(certify_lipschitz(inst.B, *k.beta1, samples), "B"));
  } else {
    skip("Lipschitz continuity of B", {"beta1"});
  }
  if (k.tau) {
    b.certificates.push_back(certify_mixed_lipschitz(inst, *k.tau, samples));
  } else {
    skip("mixed Lipschitz continuity of H", {"tau"});
  }
  if (auto miss = k.missing({"alpha", "beta"}); miss.empty()) {
    auto sym = certify_symmetric_accretive(inst, samples);
    b.certificates.push_back(std::move(sym.alpha));
    b.certificates.push_back(std::move(sym.beta));
    b.certificates.push_back(std::move(sym.combined));
  } else {
    skip("symmetric accretivity of M", miss);
  }
  if (auto miss = k.missing({"sigma", "delta", "epsilon1", "epsilon2"}); miss.empty()) {
    for (auto& c : certify_F_properties(inst, samples)) b.certificates.push_back(std::move(c));
  } else {
    skip("strong accretivity / Lipschitz continuity of F", miss);
  }
  if (k.l1) {
    b.certificates.push_back(subject(certify_d_lipschitz(inst.S, *k.l1, samples), "S"));
  } else {
    skip("D-Lipschitz continuity of S", {"l1"});
  }
  if (k.l2) {
    b.certificates.push_back(subject(certify_d_lipschitz(inst.T, *k.l2, samples), "T"));
  } else {
    skip("D-Lipschitz continuity of T", {"l2"});
  }
  b.certificates.push_back(certify_surjectivity(inst, rho_grid, samples));

  if (k.missing({"mu1", "gamma1", "mu2", "gamma2", "alpha1", "beta1", "alpha", "beta"}).empty()) {
    const auto [r, m] = resolvent_constants(k, q);
    b.r = r;
    b.m = m;
  }
  return b;
}

Constants certified_constants(const InclusionInstance& inst, const CertificateBundle& bundle) {
  Constants out = inst.constants;
  for (const auto& c : bundle.certificates) {
    if (c.method != Method::exact_affine || !c.ok() || !std::isfinite(c.constant)) continue;
    switch (c.property) {
      case Property::strongly_mixed_cocoercive: out.gamma1 = c.constant; break;
      case Property::relaxed_mixed_cocoercive: out.gamma2 = c.constant; break;
      case Property::expansive:
        if (c.subject == "A") out.alpha1 = c.constant;
        break;
      case Property::lipschitz:
        if (c.subject == "B") out.beta1 = c.constant;
        break;
      case Property::mixed_lipschitz: out.tau = c.constant; break;
      case Property::strongly_accretive: out.alpha = c.constant; break;
      case Property::relaxed_accretive: out.beta = c.constant; break;
      case Property::F_strongly_accretive_first: out.sigma = c.constant; break;
      case Property::F_strongly_accretive_second: out.delta = c.constant; break;
      case Property::F_lipschitz_first: out.epsilon1 = c.constant; break;
      case Property::F_lipschitz_second: out.epsilon2 = c.constant; break;
      case Property::d_lipschitz:
        if (c.subject == "S") out.l1 = c.constant;
        if (c.subject == "T") out.l2 = c.constant;
        break;
      default: break;
    }
  }
  return out;
}

std::pair<double, double> resolvent_constants(const Constants& k, double q) {
  const double mu1 = k.require("mu1"), gamma1 = k.require("gamma1");
  const double mu2 = k.require("mu2"), gamma2 = k.require("gamma2");
  const double alpha1 = k.require("alpha1"), beta1 = k.require("beta1");
  const double alpha = k.require("alpha"), beta = k.require("beta");
  const double r = (mu1 * std::pow(alpha1, q) - mu2 * std::pow(beta1, q)) + (gamma1 + gamma2);
  return {r, alpha - beta};
}

}  // namespace vincl
