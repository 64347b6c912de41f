#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>

#include <Eigen/LU>

#include "vincl/certify.hpp"
#include "vincl/operator.hpp"

namespace vincl {

enum class ResolventSolver {
  automatic,  ///< exact_affine when the instance is affine, else damped_fixed_point
  exact_affine,
  damped_fixed_point,
};

struct ResolventConfig {
  double rho = 1.0;
  ResolventSolver solver = ResolventSolver::automatic;
  std::size_t max_inner_iters = 10000;
  /// Target for ||H(x) + rho m(x) - z||, scaled by (1 + ||z||).
  double inner_tol = 1e-12;

  void validate() const;
};

/// Composite matrices with condition number above this are non-surjective.
inline constexpr double kSingularConditionNumber = 1e12;

/// (H + rho M(f,g)) is not onto: the resolvent does not exist.
class NonSurjectiveError : public Error {
public:
  NonSurjectiveError(std::string defect, double rho, std::optional<double> image_norm)
      : Error(ErrorCode::non_surjective, message(defect, rho)),
        defect_(std::move(defect)),
        rho_(rho),
        image_norm_(image_norm) {}

  const std::string& defect() const noexcept { return defect_; }
  double rho() const noexcept { return rho_; }
  /// Norm of the single image point when the composite has zero linear part.
  std::optional<double> image_norm() const noexcept { return image_norm_; }

private:
  static std::string message(const std::string& defect, double rho) {
    std::ostringstream os;
    os << "H + rho*M(f,g) is not surjective at rho=" << rho << ": " << defect;
    return os.str();
  }

  std::string defect_;
  double rho_;
  std::optional<double> image_norm_;
};

class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double last_residual, std::size_t iterations)
      : Error(ErrorCode::convergence_failure, what),
        last_residual_(last_residual),
        iterations_(iterations) {}

  double last_residual() const noexcept { return last_residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

private:
  double last_residual_;
  std::size_t iterations_;
};

/// Analysis of the affine composite  x -> (K + rho N) x + c.
struct CompositeAnalysis {
  Matrix linear;
  Vector offset;
  double determinant = 0.0;
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  double condition_number = 0.0;
  std::size_t rank = 0;
  bool singular = false;
  std::string defect;  ///< empty unless singular
  std::optional<double> image_norm;
};

CompositeAnalysis analyze_composite(const CompositeAffine& composite, double rho);

/// The proximal-point mapping R = (H((A,B),(C,D)) + rho M(f,g))^{-1}.
///
/// Construction performs the surjectivity check for the affine path (throws
/// NonSurjectiveError), so a constructed Resolvent is usable for any z. The
/// instance must outlive the Resolvent.
class Resolvent {
public:
  Resolvent(const InclusionInstance& inst, ResolventConfig cfg);

  Vector operator()(const Vector& z) const;

  bool exact() const noexcept { return lu_.has_value(); }
  const ResolventConfig& config() const noexcept { return cfg_; }
  /// Condition number of the composite matrix (exact path only).
  std::optional<double> condition_number() const noexcept { return condition_; }
  /// Initial damping used by the fixed-point path.
  double damping() const noexcept { return damping_; }

private:
  Vector solve_damped(const Vector& z) const;

  const InclusionInstance* inst_;
  ResolventConfig cfg_;
  std::optional<Eigen::PartialPivLU<Matrix>> lu_;
  std::optional<Vector> offset_;
  std::optional<double> condition_;
  double damping_ = 0.1;
};

Vector resolve(const InclusionInstance& inst, const ResolventConfig& cfg, const Vector& z);

/// H-composite(x) + rho m for the member m of M(f(x),g(x)) nearest to
/// `target` (first member when no target is given).
Vector forward(const InclusionInstance& inst, double rho, const Vector& x,
               const std::optional<Vector>& target = std::nullopt);

struct AuditReport {
  double q = 2.0;
  double rho = 0.0;
  double r = 0.0;
  double m = 0.0;
  double bound = 0.0;  ///< 1 / (r + rho m)
  double worst_ratio = 0.0;
  std::optional<Vector> worst_u;
  std::optional<Vector> worst_v;
  std::size_t pairs_checked = 0;
  std::size_t pairs_skipped = 0;
  bool pass = false;
  /// The bound is only asserted for q = 2.
  bool bound_applicable = true;
  std::uint64_t seed = 0;
};

/// Samples ||R(u)-R(v)|| / ||u-v|| against 1/(r + rho m) using the instance's
/// declared constants.
AuditReport audit_lipschitz(const InclusionInstance& inst, const ResolventConfig& cfg,
                            const SamplePlan& pairs);

}  // namespace vincl
