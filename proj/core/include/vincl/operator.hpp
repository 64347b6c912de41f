#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vincl/space.hpp"

namespace vincl {

/// Finite, nonempty set of points; the value of a set-valued map.
using PointSet = std::vector<Vector>;

struct AffineRealization {
  Matrix linear;
  Vector offset;

  Vector apply(const Vector& x) const;
};

/// A map X -> X with an optional exact affine realization.
class SingleValuedMap {
public:
  using Function = std::function<Vector(const Vector&)>;

  static SingleValuedMap affine(Matrix linear, Vector offset);
  static SingleValuedMap linear(Matrix linear);
  static SingleValuedMap scaled_identity(std::size_t dim, double scale);
  static SingleValuedMap identity(std::size_t dim) { return scaled_identity(dim, 1.0); }
  static SingleValuedMap zero(std::size_t dim) { return scaled_identity(dim, 0.0); }
  /// Black-box map; certification of it falls back to sampling.
  static SingleValuedMap from_function(std::size_t dim, Function fn);

  std::size_t dim() const noexcept { return dim_; }
  Vector operator()(const Vector& x) const;
  const std::optional<AffineRealization>& affine() const noexcept { return affine_; }
  bool is_affine() const noexcept { return affine_.has_value(); }

private:
  SingleValuedMap(std::size_t dim, Function fn, std::optional<AffineRealization> affine)
      : dim_(dim), fn_(std::move(fn)), affine_(std::move(affine)) {}

  std::size_t dim_;
  Function fn_;
  std::optional<AffineRealization> affine_;
};

/// The four-slot bifunction H((a,b),(c,d)), evaluated on slot values.
class BiSlotMapH {
public:
  using Function =
      std::function<Vector(const Vector&, const Vector&, const Vector&, const Vector&)>;

  /// H((a,b),(c,d)) = a + b + c + d.
  static BiSlotMapH additive();
  static BiSlotMapH from_function(Function fn);

  bool is_additive() const noexcept { return !fn_; }
  Vector operator()(const Vector& a, const Vector& b, const Vector& c, const Vector& d) const;

private:
  explicit BiSlotMapH(Function fn) : fn_(std::move(fn)) {}
  Function fn_;
};

/// F(x,y) = P x + Q y + offset.
struct PairAffineRealization {
  Matrix first;
  Matrix second;
  Vector offset;
};

class PairMapF {
public:
  using Function = std::function<Vector(const Vector&, const Vector&)>;

  static PairMapF affine(Matrix first, Matrix second, Vector offset);
  static PairMapF zero(std::size_t dim);
  static PairMapF from_function(std::size_t dim, Function fn);

  std::size_t dim() const noexcept { return dim_; }
  Vector operator()(const Vector& x, const Vector& y) const;
  const std::optional<PairAffineRealization>& affine() const noexcept { return affine_; }

private:
  PairMapF(std::size_t dim, Function fn, std::optional<PairAffineRealization> affine)
      : dim_(dim), fn_(std::move(fn)), affine_(std::move(affine)) {}

  std::size_t dim_;
  Function fn_;
  std::optional<PairAffineRealization> affine_;
};

/// Two-slot set-valued map M, always queried on (f(u), g(u)).
class SetValuedMapM {
public:
  using Function = std::function<PointSet(const Vector&, const Vector&)>;

  /// M(a,b) = {a - b}.
  static SetValuedMapM f_minus_g();
  static SetValuedMapM from_function(Function fn);

  bool is_f_minus_g() const noexcept { return !fn_; }
  PointSet operator()(const Vector& fu, const Vector& gu) const;

private:
  explicit SetValuedMapM(Function fn) : fn_(std::move(fn)) {}
  Function fn_;
};

/// X -> nonempty finite subsets of X (the S and T of the inclusion).
class FiniteSetValuedMap {
public:
  enum class Kind { identity, branches, grid, function };
  using Function = std::function<PointSet(const Vector&)>;

  struct Grid {
    std::vector<Vector> nodes;
    std::vector<PointSet> values;
  };

  static FiniteSetValuedMap identity(std::size_t dim);
  /// x -> { L_i x + b_i : i }.
  static FiniteSetValuedMap branches(std::vector<AffineRealization> maps);
  /// x -> values of the grid node nearest to x (lowest index on ties).
  static FiniteSetValuedMap grid(Grid grid);
  static FiniteSetValuedMap from_function(std::size_t dim, Function fn);
  static FiniteSetValuedMap constant(PointSet value);

  std::size_t dim() const noexcept { return dim_; }
  Kind kind() const noexcept { return kind_; }
  PointSet operator()(const Vector& x) const;

  const std::vector<AffineRealization>& branch_maps() const noexcept { return branches_; }
  const Grid& grid_data() const noexcept { return grid_; }
  /// Single affine branch, if this map is single-valued affine (identity included).
  std::optional<AffineRealization> single_affine() const;

private:
  FiniteSetValuedMap(std::size_t dim, Kind kind) : dim_(dim), kind_(kind) {}

  std::size_t dim_;
  Kind kind_;
  std::vector<AffineRealization> branches_;
  Grid grid_;
  Function fn_;
};

/// Named constant slots of an inclusion instance. Unset slots are unknown.
struct Constants {
  std::optional<double> mu1, gamma1, mu2, gamma2;
  std::optional<double> alpha, beta;
  std::optional<double> alpha1, beta1;
  std::optional<double> tau;
  std::optional<double> sigma, delta;
  std::optional<double> epsilon1, epsilon2;
  std::optional<double> l1, l2;

  struct Slot {
    std::string_view name;
    std::optional<double> Constants::*member;
  };
  static const std::array<Slot, 15>& slots();

  /// Names of the requested slots that are unset.
  std::vector<std::string> missing(std::initializer_list<std::string_view> names) const;
  double require(std::string_view name) const;
  std::optional<double> get(std::string_view name) const;
  void set(std::string_view name, double value);
};

/// Full problem datum for  omega in F(v,w) + M(f(u),g(u)),  v in S(u), w in T(u).
struct InclusionInstance {
  std::string name;
  SpaceConfig space;
  SingleValuedMap A, B, C, D, f, g;
  BiSlotMapH H;
  PairMapF F;
  SetValuedMapM M;
  FiniteSetValuedMap S, T;
  Vector omega;
  double rho = 1.0;
  Constants constants;

  std::size_t dim() const noexcept { return space.dim; }
  /// Checks dimensions of every constituent and rho > 0.
  void validate() const;
  /// Convergence hypotheses on constant ordering that the declared constants
  /// violate (alpha>beta, mu1>mu2, alpha1>beta1, gamma1,gamma2>0).
  std::vector<std::string> ordering_violations() const;
};

double hausdorff_distance(const PointSet& a, const PointSet& b);

/// H((Ax,Bx),(Cx,Dx)).
Vector eval_H_on_point(const InclusionInstance& inst, const Vector& x);

/// M(f(x), g(x)).
PointSet eval_M_on_point(const InclusionInstance& inst, const Vector& x);

/// { H-composite(x) + rho m : m in M(f(x),g(x)) }.
PointSet forward_image(const InclusionInstance& inst, double rho, const Vector& x);

/// Exact affine form of  x -> H-composite(x)  and  x -> M(f(x),g(x)),
/// available when H is additive, M is f-minus-g and A..D, f, g are affine.
struct CompositeAffine {
  Matrix h_linear;
  Vector h_offset;
  Matrix m_linear;
  Vector m_offset;

  Matrix linear(double rho) const { return h_linear + rho * m_linear; }
  Vector offset(double rho) const { return h_offset + m_offset * rho; }
};
std::optional<CompositeAffine> composite_affine(const InclusionInstance& inst);

struct ResidualReport {
  double value = 0.0;
  bool v_in_S = true;
  bool w_in_T = true;
  double v_distance = 0.0;  ///< distance from v to S(u)
  double w_distance = 0.0;

  bool flagged() const noexcept { return !v_in_S || !w_in_T; }
};

/// min over m in M(f(u),g(u)) of ||omega - F(v,w) - m||, with membership of
/// v in S(u) and w in T(u) checked to `membership_tol`.
ResidualReport inclusion_residual(const InclusionInstance& inst, const Vector& u,
                                  const Vector& v, const Vector& w,
                                  double membership_tol = 1e-9);

}  // namespace vincl
