#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "vincl/error.hpp"

namespace vincl {

using Matrix = Eigen::MatrixXd;

/// Element of a finite-dimensional real inner-product space (R^n or a
/// truncated l^2). Coordinates are finite at construction; arithmetic
/// results are not re-validated so that divergence can be observed.
class Vector {
public:
  explicit Vector(std::vector<double> coords);
  Vector(std::initializer_list<double> coords);
  explicit Vector(const Eigen::VectorXd& coords);

  static Vector zeros(std::size_t dim);
  static Vector constant(std::size_t dim, double value);
  /// Unit vector e_index (0-based) in R^dim.
  static Vector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.size()); }
  double operator[](std::size_t i) const { return data_[static_cast<Eigen::Index>(i)]; }
  std::span<const double> coords() const noexcept {
    return {data_.data(), static_cast<std::size_t>(data_.size())};
  }
  const Eigen::VectorXd& eigen() const noexcept { return data_; }
  std::vector<double> to_std() const { return {data_.data(), data_.data() + data_.size()}; }

  bool all_finite() const noexcept { return data_.allFinite(); }

  Vector& operator+=(const Vector& rhs);
  Vector& operator-=(const Vector& rhs);
  Vector& operator*=(double s);

  friend Vector operator+(Vector lhs, const Vector& rhs) { return lhs += rhs; }
  friend Vector operator-(Vector lhs, const Vector& rhs) { return lhs -= rhs; }
  friend Vector operator*(Vector v, double s) { return v *= s; }
  friend Vector operator*(double s, Vector v) { return v *= s; }
  friend Vector operator-(Vector v) { return v *= -1.0; }
  friend bool operator==(const Vector& a, const Vector& b) {
    return a.data_.size() == b.data_.size() && a.data_ == b.data_;
  }

  /// Wraps an arithmetic result without the finiteness check.
  static Vector unchecked(Eigen::VectorXd coords);

private:
  struct Unchecked {};
  Vector(Eigen::VectorXd coords, Unchecked) : data_(std::move(coords)) {}

  Eigen::VectorXd data_;
};

Vector operator*(const Matrix& m, const Vector& x);

/// Dimension, smoothness exponent q and characteristic-inequality constant c_q.
struct SpaceConfig {
  std::size_t dim = 2;
  double q = 2.0;
  double c_q = 1.0;

  void validate() const;
};

double inner(const Vector& x, const Vector& y);
double norm(const Vector& x);
double distance(const Vector& x, const Vector& y);

/// Generalized duality map J_q(x) = ||x||^{q-2} x, with J_q(0) = 0.
Vector duality_map(const Vector& x, double q);

/// Whether ||x+y||^q <= ||x||^q + q<y, J_q(x)> + c_q ||y||^q holds, with
/// violations below rel_tol * (1 + |rhs|) ignored.
bool characteristic_inequality_check(const Vector& x, const Vector& y, double q, double c_q,
                                     double rel_tol = 1e-10);

}  // namespace vincl
