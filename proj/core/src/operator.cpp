#include "vincl/operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace vincl {

namespace {

void require_dim(std::string_view where, std::size_t expected, const Vector& x) {
  if (x.dim() != expected) throw_dimension_mismatch(where, expected, x.dim());
}

void require_square(std::string_view where, const Matrix& m, std::size_t dim) {
  if (static_cast<std::size_t>(m.rows()) != dim || static_cast<std::size_t>(m.cols()) != dim) {
    std::ostringstream os;
    os << where << ": expected " << dim << "x" << dim << " matrix, got " << m.rows() << "x"
       << m.cols();
    throw Error(ErrorCode::dimension_mismatch, os.str());
  }
  if (!m.allFinite()) throw Error(ErrorCode::non_finite, std::string(where) + ": non-finite entry");
}

void require_nonempty(std::string_view where, const PointSet& s) {
  if (s.empty()) throw Error(ErrorCode::empty_set, std::string(where) + ": empty set");
}

}  // namespace

Vector AffineRealization::apply(const Vector& x) const { return linear * x + offset; }

// SingleValuedMap

SingleValuedMap SingleValuedMap::affine(Matrix linear, Vector offset) {
  const std::size_t dim = offset.dim();
  require_square("SingleValuedMap::affine", linear, dim);
  AffineRealization real{std::move(linear), std::move(offset)};
  auto fn = [real](const Vector& x) { return real.apply(x); };
  return SingleValuedMap(dim, std::move(fn), std::move(real));
}

SingleValuedMap SingleValuedMap::linear(Matrix linear) {
  const auto dim = static_cast<std::size_t>(linear.rows());
  return affine(std::move(linear), Vector::zeros(dim));
}

SingleValuedMap SingleValuedMap::scaled_identity(std::size_t dim, double scale) {
  const auto n = static_cast<Eigen::Index>(dim);
  return linear(scale * Matrix::Identity(n, n));
}

SingleValuedMap SingleValuedMap::from_function(std::size_t dim, Function fn) {
  if (!fn) throw Error(ErrorCode::invalid_argument, "SingleValuedMap: empty function");
  return SingleValuedMap(dim, std::move(fn), std::nullopt);
}

Vector SingleValuedMap::operator()(const Vector& x) const {
  require_dim("SingleValuedMap", dim_, x);
  Vector y = fn_(x);
  require_dim("SingleValuedMap result", dim_, y);
  return y;
}

// BiSlotMapH

BiSlotMapH BiSlotMapH::additive() { return BiSlotMapH(Function{}); }

BiSlotMapH BiSlotMapH::from_function(Function fn) {
  if (!fn) throw Error(ErrorCode::invalid_argument, "BiSlotMapH: empty function");
  return BiSlotMapH(std::move(fn));
}

Vector BiSlotMapH::operator()(const Vector& a, const Vector& b, const Vector& c,
                              const Vector& d) const {
  if (fn_) return fn_(a, b, c, d);
  Vector out = a;
  out += b;
  out += c;
  out += d;
  return out;
}

// PairMapF

PairMapF PairMapF::affine(Matrix first, Matrix second, Vector offset) {
  const std::size_t dim = offset.dim();
  require_square("PairMapF::affine (first)", first, dim);
  require_square("PairMapF::affine (second)", second, dim);
  PairAffineRealization real{std::move(first), std::move(second), std::move(offset)};
  auto fn = [real](const Vector& x, const Vector& y) {
    return real.first * x + real.second * y + real.offset;
  };
  return PairMapF(dim, std::move(fn), std::move(real));
}

PairMapF PairMapF::zero(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return affine(Matrix::Zero(n, n), Matrix::Zero(n, n), Vector::zeros(dim));
}

PairMapF PairMapF::from_function(std::size_t dim, Function fn) {
  if (!fn) throw Error(ErrorCode::invalid_argument, "PairMapF: empty function");
  return PairMapF(dim, std::move(fn), std::nullopt);
}

Vector PairMapF::operator()(const Vector& x, const Vector& y) const {
  require_dim("PairMapF (first)", dim_, x);
  require_dim("PairMapF (second)", dim_, y);
  return fn_(x, y);
}

// SetValuedMapM

SetValuedMapM SetValuedMapM::f_minus_g() { return SetValuedMapM(Function{}); }

SetValuedMapM SetValuedMapM::from_function(Function fn) {
  if (!fn) throw Error(ErrorCode::invalid_argument, "SetValuedMapM: empty function");
  return SetValuedMapM(std::move(fn));
}

PointSet SetValuedMapM::operator()(const Vector& fu, const Vector& gu) const {
  if (!fn_) return {fu - gu};
  PointSet out = fn_(fu, gu);
  require_nonempty("SetValuedMapM", out);
  for (const auto& p : out) {
    if (!p.all_finite()) throw Error(ErrorCode::non_finite, "SetValuedMapM: non-finite member");
  }
  return out;
}

// FiniteSetValuedMap

FiniteSetValuedMap FiniteSetValuedMap::identity(std::size_t dim) {
  return FiniteSetValuedMap(dim, Kind::identity);
}

FiniteSetValuedMap FiniteSetValuedMap::branches(std::vector<AffineRealization> maps) {
  if (maps.empty()) throw Error(ErrorCode::empty_set, "FiniteSetValuedMap: no branches");
  const std::size_t dim = maps.front().offset.dim();
  for (const auto& m : maps) {
    require_dim("FiniteSetValuedMap branch offset", dim, m.offset);
    require_square("FiniteSetValuedMap branch", m.linear, dim);
  }
  FiniteSetValuedMap out(dim, Kind::branches);
  out.branches_ = std::move(maps);
  return out;
}

FiniteSetValuedMap FiniteSetValuedMap::grid(Grid grid) {
  if (grid.nodes.empty()) throw Error(ErrorCode::empty_set, "FiniteSetValuedMap: empty grid");
  if (grid.nodes.size() != grid.values.size()) {
    throw Error(ErrorCode::invalid_argument,
                "FiniteSetValuedMap: grid has " + std::to_string(grid.nodes.size()) +
                    " nodes but " + std::to_string(grid.values.size()) + " value sets");
  }
  const std::size_t dim = grid.nodes.front().dim();
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    require_dim("FiniteSetValuedMap grid node", dim, grid.nodes[i]);
    require_nonempty("FiniteSetValuedMap grid value", grid.values[i]);
    for (const auto& p : grid.values[i]) require_dim("FiniteSetValuedMap grid value", dim, p);
  }
  FiniteSetValuedMap out(dim, Kind::grid);
  out.grid_ = std::move(grid);
  return out;
}

FiniteSetValuedMap FiniteSetValuedMap::from_function(std::size_t dim, Function fn) {
  if (!fn) throw Error(ErrorCode::invalid_argument, "FiniteSetValuedMap: empty function");
  FiniteSetValuedMap out(dim, Kind::function);
  out.fn_ = std::move(fn);
  return out;
}

FiniteSetValuedMap FiniteSetValuedMap::constant(PointSet value) {
  require_nonempty("FiniteSetValuedMap::constant", value);
  const std::size_t dim = value.front().dim();
  const auto n = static_cast<Eigen::Index>(dim);
  std::vector<AffineRealization> maps;
  maps.reserve(value.size());
  for (auto& p : value) maps.push_back({Matrix::Zero(n, n), std::move(p)});
  return branches(std::move(maps));
}

PointSet FiniteSetValuedMap::operator()(const Vector& x) const {
  require_dim("FiniteSetValuedMap", dim_, x);
  switch (kind_) {
    case Kind::identity:
      return {x};
    case Kind::branches: {
      PointSet out;
      out.reserve(branches_.size());
      for (const auto& b : branches_) out.push_back(b.apply(x));
      return out;
    }
    case Kind::grid: {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < grid_.nodes.size(); ++i) {
        const double d = distance(x, grid_.nodes[i]);
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      return grid_.values[best];
    }
    case Kind::function: {
      PointSet out = fn_(x);
      require_nonempty("FiniteSetValuedMap", out);
      for (const auto& p : out) require_dim("FiniteSetValuedMap result", dim_, p);
      return out;
    }
  }
  return {x};
}

std::optional<AffineRealization> FiniteSetValuedMap::single_affine() const {
  const auto n = static_cast<Eigen::Index>(dim_);
  if (kind_ == Kind::identity) return AffineRealization{Matrix::Identity(n, n), Vector::zeros(dim_)};
  if (kind_ == Kind::branches && branches_.size() == 1) return branches_.front();
  return std::nullopt;
}

// Constants

const std::array<Constants::Slot, 15>& Constants::slots() {
  static const std::array<Slot, 15> table{{
      {"mu1", &Constants::mu1},
      {"gamma1", &Constants::gamma1},
      {"mu2", &Constants::mu2},
      {"gamma2", &Constants::gamma2},
      {"alpha", &Constants::alpha},
      {"beta", &Constants::beta},
      {"alpha1", &Constants::alpha1},
      {"beta1", &Constants::beta1},
      {"tau", &Constants::tau},
      {"sigma", &Constants::sigma},
      {"delta", &Constants::delta},
      {"epsilon1", &Constants::epsilon1},
      {"epsilon2", &Constants::epsilon2},
      {"l1", &Constants::l1},
      {"l2", &Constants::l2},
  }};
  return table;
}

namespace {

const Constants::Slot& find_slot(std::string_view name) {
  for (const auto& s : Constants::slots()) {
    if (s.name == name) return s;
  }
  throw Error(ErrorCode::invalid_argument, "unknown constant '" + std::string(name) + "'");
}

}  // namespace

std::vector<std::string> Constants::missing(std::initializer_list<std::string_view> names) const {
  std::vector<std::string> out;
  for (auto name : names) {
    if (!(this->*find_slot(name).member)) out.emplace_back(name);
  }
  return out;
}

double Constants::require(std::string_view name) const {
  const auto v = get(name);
  if (!v) {
    throw Error(ErrorCode::missing_constants, "missing constant '" + std::string(name) + "'");
  }
  return *v;
}

std::optional<double> Constants::get(std::string_view name) const {
  return this->*find_slot(name).member;
}

void Constants::set(std::string_view name, double value) { this->*find_slot(name).member = value; }

// InclusionInstance

void InclusionInstance::validate() const {
  space.validate();
  const std::size_t n = space.dim;
  const std::pair<std::string_view, const SingleValuedMap*> maps[] = {
      {"A", &A}, {"B", &B}, {"C", &C}, {"D", &D}, {"f", &f}, {"g", &g}};
  for (const auto& [label, map] : maps) {
    if (map->dim() != n) throw_dimension_mismatch(std::string("map ") + std::string(label), n, map->dim());
  }
  if (F.dim() != n) throw_dimension_mismatch("map F", n, F.dim());
  if (S.dim() != n) throw_dimension_mismatch("map S", n, S.dim());
  if (T.dim() != n) throw_dimension_mismatch("map T", n, T.dim());
  if (omega.dim() != n) throw_dimension_mismatch("omega", n, omega.dim());
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw Error(ErrorCode::invalid_argument, "instance: rho must be > 0");
  }
}

std::vector<std::string> InclusionInstance::ordering_violations() const {
  std::vector<std::string> out;
  const auto& k = constants;
  auto strictly_greater = [&](const char* label, const std::optional<double>& a,
                              const std::optional<double>& b) {
    if (a && b && !(*a > *b)) out.emplace_back(label);
  };
  strictly_greater("alpha > beta", k.alpha, k.beta);
  strictly_greater("mu1 > mu2", k.mu1, k.mu2);
  strictly_greater("alpha1 > beta1", k.alpha1, k.beta1);
  if (k.gamma1 && !(*k.gamma1 > 0.0)) out.emplace_back("gamma1 > 0");
  if (k.gamma2 && !(*k.gamma2 > 0.0)) out.emplace_back("gamma2 > 0");
  for (const auto& s : Constants::slots()) {
    const auto& v = k.*s.member;
    if (v && *v < 0.0) out.push_back(std::string(s.name) + " >= 0");
  }
  return out;
}

// Operations

double hausdorff_distance(const PointSet& a, const PointSet& b) {
  require_nonempty("hausdorff_distance (first)", a);
  require_nonempty("hausdorff_distance (second)", b);
  auto directed = [](const PointSet& from, const PointSet& to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) best = std::min(best, distance(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

Vector eval_H_on_point(const InclusionInstance& inst, const Vector& x) {
  require_dim("eval_H_on_point", inst.dim(), x);
  return inst.H(inst.A(x), inst.B(x), inst.C(x), inst.D(x));
}

PointSet eval_M_on_point(const InclusionInstance& inst, const Vector& x) {
  return inst.M(inst.f(x), inst.g(x));
}

PointSet forward_image(const InclusionInstance& inst, double rho, const Vector& x) {
  const Vector h = eval_H_on_point(inst, x);
  PointSet out = eval_M_on_point(inst, x);
  for (auto& m : out) m = h + rho * m;
  return out;
}

std::optional<CompositeAffine> composite_affine(const InclusionInstance& inst) {
  if (!inst.H.is_additive() || !inst.M.is_f_minus_g()) return std::nullopt;
  for (const auto* m : {&inst.A, &inst.B, &inst.C, &inst.D, &inst.f, &inst.g}) {
    if (!m->is_affine()) return std::nullopt;
  }
  const auto& a = *inst.A.affine();
  const auto& b = *inst.B.affine();
  const auto& c = *inst.C.affine();
  const auto& d = *inst.D.affine();
  const auto& f = *inst.f.affine();
  const auto& g = *inst.g.affine();
  return CompositeAffine{
      a.linear + b.linear + c.linear + d.linear,
      a.offset + b.offset + c.offset + d.offset,
      f.linear - g.linear,
      f.offset - g.offset,
  };
}

ResidualReport inclusion_residual(const InclusionInstance& inst, const Vector& u, const Vector& v,
                                  const Vector& w, double membership_tol) {
  require_dim("inclusion_residual (u)", inst.dim(), u);
  require_dim("inclusion_residual (v)", inst.dim(), v);
  require_dim("inclusion_residual (w)", inst.dim(), w);

  ResidualReport report;
  auto set_distance = [](const Vector& p, const PointSet& set) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : set) best = std::min(best, distance(p, s));
    return best;
  };
  report.v_distance = set_distance(v, inst.S(u));
  report.w_distance = set_distance(w, inst.T(u));
  report.v_in_S = report.v_distance <= membership_tol * (1.0 + norm(v));
  report.w_in_T = report.w_distance <= membership_tol * (1.0 + norm(w));

  const Vector base = inst.omega - inst.F(v, w);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : eval_M_on_point(inst, u)) best = std::min(best, distance(base, m));
  report.value = best;
  return report;
}

}  // namespace vincl
