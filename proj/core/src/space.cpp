#include "vincl/space.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace vincl {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::invalid_exponent: return "invalid_exponent";
    case ErrorCode::non_finite: return "non_finite";
    case ErrorCode::empty_set: return "empty_set";
    case ErrorCode::insufficient_evidence: return "insufficient_evidence";
    case ErrorCode::missing_constants: return "missing_constants";
    case ErrorCode::non_surjective: return "non_surjective";
    case ErrorCode::convergence_failure: return "convergence_failure";
    case ErrorCode::divergence: return "divergence";
    case ErrorCode::index_out_of_range: return "index_out_of_range";
    case ErrorCode::parse_error: return "parse_error";
  }
  return "unknown";
}

void throw_dimension_mismatch(std::string_view where, std::size_t lhs, std::size_t rhs) {
  std::ostringstream os;
  os << where << ": dimension mismatch (" << lhs << " vs " << rhs << ")";
  throw Error(ErrorCode::dimension_mismatch, os.str());
}

namespace {

Eigen::VectorXd checked(const double* data, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "Vector: dimension must be positive");
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(data[i])) {
      throw Error(ErrorCode::non_finite,
                  "Vector: coordinate " + std::to_string(i) + " is not finite");
    }
    v[static_cast<Eigen::Index>(i)] = data[i];
  }
  return v;
}

void require_same_dim(std::string_view where, const Vector& a, const Vector& b) {
  if (a.dim() != b.dim()) throw_dimension_mismatch(where, a.dim(), b.dim());
}

}  // namespace

Vector::Vector(std::vector<double> coords) : data_(checked(coords.data(), coords.size())) {}

Vector::Vector(std::initializer_list<double> coords)
    : data_(checked(std::data(coords), coords.size())) {}

Vector::Vector(const Eigen::VectorXd& coords)
    : data_(checked(coords.data(), static_cast<std::size_t>(coords.size()))) {}

Vector Vector::zeros(std::size_t dim) { return constant(dim, 0.0); }

Vector Vector::constant(std::size_t dim, double value) {
  if (dim == 0) throw Error(ErrorCode::invalid_argument, "Vector: dimension must be positive");
  return Vector(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim), value));
}

Vector Vector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) {
    throw Error(ErrorCode::index_out_of_range, "Vector::basis: index " + std::to_string(index) +
                                                   " out of range for dimension " +
                                                   std::to_string(dim));
  }
  Vector v = zeros(dim);
  v.data_[static_cast<Eigen::Index>(index)] = 1.0;
  return v;
}

Vector Vector::unchecked(Eigen::VectorXd coords) { return Vector(std::move(coords), Unchecked{}); }

Vector& Vector::operator+=(const Vector& rhs) {
  require_same_dim("Vector::operator+", *this, rhs);
  data_ += rhs.data_;
  return *this;
}

Vector& Vector::operator-=(const Vector& rhs) {
  require_same_dim("Vector::operator-", *this, rhs);
  data_ -= rhs.data_;
  return *this;
}

Vector& Vector::operator*=(double s) {
  data_ *= s;
  return *this;
}

Vector operator*(const Matrix& m, const Vector& x) {
  if (static_cast<std::size_t>(m.cols()) != x.dim()) {
    throw_dimension_mismatch("matrix-vector product", static_cast<std::size_t>(m.cols()),
                             x.dim());
  }
  return Vector::unchecked(m * x.eigen());
}

void SpaceConfig::validate() const {
  if (dim == 0) throw Error(ErrorCode::invalid_argument, "SpaceConfig: dim must be positive");
  if (!(q > 1.0) || !std::isfinite(q)) {
    throw Error(ErrorCode::invalid_exponent, "SpaceConfig: q must be > 1");
  }
  if (!(c_q > 0.0) || !std::isfinite(c_q)) {
    throw Error(ErrorCode::invalid_argument, "SpaceConfig: c_q must be > 0");
  }
}

double inner(const Vector& x, const Vector& y) {
  require_same_dim("inner", x, y);
  return x.eigen().dot(y.eigen());
}

double norm(const Vector& x) { return x.eigen().norm(); }

double distance(const Vector& x, const Vector& y) {
  require_same_dim("distance", x, y);
  return (x.eigen() - y.eigen()).norm();
}

Vector duality_map(const Vector& x, double q) {
  if (!(q > 1.0)) {
    throw Error(ErrorCode::invalid_exponent,
                "duality_map: exponent q must be > 1, got " + std::to_string(q));
  }
  const double n = norm(x);
  if (n == 0.0) return Vector::zeros(x.dim());
  if (q == 2.0) return x;
  return x * std::pow(n, q - 2.0);
}

bool characteristic_inequality_check(const Vector& x, const Vector& y, double q, double c_q,
                                     double rel_tol) {
  require_same_dim("characteristic_inequality_check", x, y);
  const double lhs = std::pow(norm(x + y), q);
  const double rhs =
      std::pow(norm(x), q) + q * inner(y, duality_map(x, q)) + c_q * std::pow(norm(y), q);
  // Scale the slack by the magnitudes of the summands, not the (possibly
  // cancelled) right-hand side.
  const double scale = std::pow(norm(x), q) + std::pow(norm(y), q) * (1.0 + c_q) +
                       q * std::abs(inner(y, duality_map(x, q)));
  return lhs <= rhs + rel_tol * (1.0 + scale);
}

}  // namespace vincl
