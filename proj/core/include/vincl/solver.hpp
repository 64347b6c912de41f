#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vincl/operator.hpp"
#include "vincl/resolvent.hpp"

namespace vincl {

enum class ConditionVerdict { satisfied, violated_upper, violated_radicand, violated_lower };
std::string_view to_string(ConditionVerdict v);

/// Breakdown of  0 < (tau^q + c_q rho^q (e1 l1 + e2 l2)^q - rho q (sigma+delta) tau^q)^(1/q) < r + rho m.
struct ConditionReport {
  double q = 2.0;
  double c_q = 1.0;
  double rho = 0.0;
  double tau_term = 0.0;       ///< tau^q
  double lipschitz_term = 0.0; ///< c_q rho^q (eps1 l1 + eps2 l2)^q
  double accretive_term = 0.0; ///< rho q (sigma + delta) tau^q
  double radicand = 0.0;
  std::optional<double> root;
  double r = 0.0;
  double m = 0.0;
  double denominator = 0.0;    ///< r + rho m
  std::optional<double> theta;
  ConditionVerdict verdict = ConditionVerdict::violated_radicand;

  bool satisfied() const noexcept { return verdict == ConditionVerdict::satisfied; }
};

/// Throws Error(missing_constants) naming every unset constant the condition needs.
ConditionReport check_condition_vi(const InclusionInstance& inst, double rho);

/// theta_n (with the (1 + 1/n) multipliers) when n is given, the limit theta otherwise.
/// Throws when the radicand is negative or r + rho m <= 0.
double theta(const InclusionInstance& inst, double rho, std::optional<std::size_t> n = std::nullopt);

/// Index of the point of `target_set` nearest to `current`; lowest index on ties.
std::size_t nadler_select_index(const Vector& current, const PointSet& target_set);
Vector nadler_select(const Vector& current, const PointSet& target_set);

/// e_n = c0 factor^n d / ||d||  (zero sequence by default).
struct ErrorSequence {
  enum class Kind { zero, geometric };
  Kind kind = Kind::zero;
  double c0 = 0.0;
  double factor = 0.0;
  /// Defaults to (1,...,1).
  std::optional<Vector> direction;

  static ErrorSequence none() { return {}; }
  static ErrorSequence geometric(double c0, double factor,
                                 std::optional<Vector> direction = std::nullopt);

  /// A varpi in (factor, 1) for which sum ||e_j - e_{j-1}|| varpi^{-j} converges.
  std::optional<double> varpi() const;
  Vector at(std::size_t n, std::size_t dim) const;
  void validate(std::size_t dim) const;
};

struct SolverConfig {
  /// Falls back to the instance's rho.
  std::optional<double> rho;
  std::size_t max_iters = 1000;
  double tol = 1e-10;
  ErrorSequence errors;
  /// Defaults to (1,...,1).
  std::optional<Vector> z0;
  /// Overrides u0 = R(z0).
  std::optional<Vector> u0;
  ResolventSolver resolvent_solver = ResolventSolver::automatic;
  std::size_t divergence_window = 20;
  double divergence_growth = 10.0;

  void validate(std::size_t dim) const;
};

/// Row n holds the iterate (z_n, u_n, v_n, w_n); `step` is ||u_n - u_{n-1}||
/// and `ratio` is step_n / step_{n-1}, both absent where undefined.
struct TraceRow {
  std::size_t n = 0;
  Vector z, u, v, w;
  std::optional<double> step;
  std::optional<double> ratio;
  double residual = 0.0;
  bool residual_flagged = false;
  std::optional<double> theta_n;
  /// ||e_n||, the error added when forming z_{n+1}.
  double error_norm = 0.0;
  std::size_t v_index = 0;  ///< position of v_n within S(u_n)
  std::size_t w_index = 0;
};

struct SolveSummary {
  bool converged = false;
  std::size_t iterations = 0;
  double final_residual = 0.0;
  /// Geometric mean of the last (up to 10) step ratios.
  std::optional<double> observed_rate;
  std::optional<double> theta;
  std::optional<ConditionVerdict> condition;
  /// ||u - R(H(u) - rho F(v,w) + rho omega)|| at the final iterate.
  double fixed_point_defect = 0.0;
  double final_error_norm = 0.0;
};

struct SolveTrace {
  std::string instance;
  double rho = 0.0;
  double tol = 0.0;
  std::size_t max_iters = 0;
  ErrorSequence errors;
  std::vector<TraceRow> rows;
  SolveSummary summary;
  std::vector<std::string> warnings;

  const TraceRow& last() const { return rows.back(); }
};

class DivergenceError : public Error {
public:
  DivergenceError(const std::string& what, SolveTrace trace)
      : Error(ErrorCode::divergence, what), trace_(std::move(trace)) {}
  const SolveTrace& trace() const noexcept { return trace_; }

private:
  SolveTrace trace_;
};

/// The proximal-point iteration
///   u_n = R(z_n),  v_{n+1} nearest to v_n in S(u_{n+1}),  w likewise in T,
///   z_{n+1} = H-composite(u_n) - rho F(v_n, w_n) + rho omega + e_n.
/// Stops once ||u_{n+1} - u_n|| <= tol and the inclusion residual is at most
/// 10 tol (1 + ||omega||); otherwise returns an unconverged trace after
/// max_iters. Throws DivergenceError on sustained step growth or non-finite
/// iterates, and propagates resolvent errors.
SolveTrace solve(const InclusionInstance& inst, const SolverConfig& cfg);

/// ||u - R(H-composite(u) - rho F(v,w) + rho omega)||.
double fixed_point_defect(const InclusionInstance& inst, const Resolvent& R, const Vector& u,
                          const Vector& v, const Vector& w);

}  // namespace vincl
