#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vincl/certify.hpp"
#include "vincl/operator.hpp"

namespace vincl {

/// Where an expected value comes from: a published worked example, an
/// independently derived value, or a trivial identity.
enum class Source { published, derived, trivial };
std::string_view to_string(Source s);

struct CertificateExpectation {
  Property property;
  /// Empty matches any subject.
  std::string subject;
  std::optional<double> constant;
  Verdict verdict = Verdict::pass;
  Source source = Source::published;
};

struct SolverExpectation {
  double rho = 1.0;
  std::optional<double> theta;
  double theta_tol = 0.0;
  /// Solution the iteration must reach from the default start.
  std::optional<Vector> converges_to;
  Source source = Source::derived;
};

struct NamedInstance {
  std::string name;
  std::string description;
  InclusionInstance instance;
  std::vector<CertificateExpectation> certificates;
  std::vector<SolverExpectation> solver;
};

struct ExpectationOutcome {
  const CertificateExpectation* expectation = nullptr;
  const Certificate* certificate = nullptr;  ///< null when no certificate matched
  bool met = false;
};

/// Matches each certificate expectation against the bundle (constants to 1e-9).
std::vector<ExpectationOutcome> evaluate_expectations(const NamedInstance& named,
                                                      const CertificateBundle& bundle);

NamedInstance example_3_2();
/// Truncation of the sequence-space example to R^trunc_dim; n_index is 1-based.
NamedInstance example_3_3(std::size_t trunc_dim = 8, std::size_t n_index = 3);
NamedInstance example_4_7();

/// omega in F(S(u),T(u)) + lambda N(u), realized with f = lambda N, g = 0, H = A.
NamedInstance reduction_scaled_n(double lambda);
/// 0 in T(u) + N(u): F(v,w) = w, omega = 0, f = N, g = 0, H = A = I.
NamedInstance reduction_zero_in_t_plus_n();

/// Degenerate shapes: H(A,B) with C = D = 0, H(A) alone, H = B, and the two
/// problem reductions above (lambda = 2 for the scaled one).
std::vector<NamedInstance> reduction_constructors();

std::vector<std::string> builtin_names();
/// Looks up a built-in by name (examples with their default parameters and
/// every reduction).
std::optional<NamedInstance> builtin_instance(std::string_view name);

}  // namespace vincl
