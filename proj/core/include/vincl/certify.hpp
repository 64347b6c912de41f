#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vincl/operator.hpp"

namespace vincl {

/// Deterministic sample plan: `pairs` seeded pseudo-random pairs with
/// coordinates uniform in [-scale, scale], plus a fixed lattice of axis
/// points, +/- unit vectors and scaled sums. Each pair also carries an
/// auxiliary point used for the "for all u" slots of the definitions.
struct SamplePlan {
  std::uint64_t seed = 42;
  std::size_t pairs = 512;
  bool include_lattice = true;
  double scale = 10.0;
  /// Skip the exact-affine path even when a realization is available.
  bool force_sampled = false;

  static SamplePlan none() {
    SamplePlan p;
    p.pairs = 0;
    p.include_lattice = false;
    return p;
  }
  bool empty() const noexcept { return pairs == 0 && !include_lattice; }
};

struct SamplePair {
  Vector x;
  Vector y;
  Vector aux;
};

std::vector<SamplePair> generate_pairs(const SamplePlan& plan, std::size_t dim);

enum class Property {
  strongly_accretive,
  relaxed_accretive,
  cocoercive,
  relaxed_cocoercive,
  lipschitz,
  expansive,
  strongly_mixed_cocoercive,
  relaxed_mixed_cocoercive,
  mixed_lipschitz,
  d_lipschitz,
  F_strongly_accretive_first,
  F_strongly_accretive_second,
  F_lipschitz_first,
  F_lipschitz_second,
  symmetric_accretive,
  surjective_H_plus_rhoM,
  generalized_mixed_accretive,
};

enum class Method { exact_affine, sampled };
enum class Verdict { pass, fail, estimated };

std::string_view to_string(Property p);
std::string_view to_string(Method m);
std::string_view to_string(Verdict v);

struct Witness {
  std::string summary;
  std::optional<Vector> x;
  std::optional<Vector> y;
  double lhs = std::numeric_limits<double>::quiet_NaN();
  double rhs = std::numeric_limits<double>::quiet_NaN();
};

/// A verified or estimated operator-property constant.
///
/// `constant` is the best constant the evidence supports (exact for the
/// affine path, worst observed for the sampled path). Sampled certificates
/// never report `pass`: a finite sample cannot prove a universally
/// quantified inequality, so they are `estimated` or `fail`.
struct Certificate {
  Property property = Property::lipschitz;
  /// Which operator the property is about ("A", "H", "M(f,.)", "S", ...).
  std::string subject;
  std::optional<double> claimed;
  double constant = std::numeric_limits<double>::quiet_NaN();
  Method method = Method::exact_affine;
  Verdict verdict = Verdict::estimated;
  Witness witness;
  std::optional<std::uint64_t> seed;
  std::size_t samples_checked = 0;
  std::vector<std::pair<std::string, double>> details;

  bool ok() const noexcept { return verdict != Verdict::fail; }
  std::optional<double> detail(std::string_view key) const;
};

/// Violations smaller than this times (1 + |rhs|) are floating-point slack.
inline constexpr double kInequalitySlack = 1e-9;

// Single-map properties.
Certificate certify_strong_accretive(const SingleValuedMap& map, double claimed, double q,
                                     const SamplePlan& samples);
Certificate certify_relaxed_accretive(const SingleValuedMap& map, double claimed, double q,
                                      const SamplePlan& samples);
Certificate certify_cocoercive(const SingleValuedMap& map, double claimed, double q,
                               const SamplePlan& samples);
Certificate certify_relaxed_cocoercive(const SingleValuedMap& map, double claimed, double q,
                                       const SamplePlan& samples);
Certificate certify_lipschitz(const SingleValuedMap& map, double claimed, const SamplePlan& samples);
Certificate certify_expansive(const SingleValuedMap& map, double claimed, const SamplePlan& samples);
Certificate certify_d_lipschitz(const FiniteSetValuedMap& map, double claimed,
                                const SamplePlan& samples);

// Instance-level properties; claims come from `inst.constants`.

/// (mu1,gamma1)-strongly mixed cocoercive w.r.t. (A,C) and (mu2,gamma2)-relaxed
/// mixed cocoercive w.r.t. (B,D). The constant reported is the best gamma for
/// the declared mu.
std::pair<Certificate, Certificate> certify_symmetric_mixed_cocoercive(
    const InclusionInstance& inst, const SamplePlan& samples);

Certificate certify_mixed_lipschitz(const InclusionInstance& inst, double claimed,
                                    const SamplePlan& samples);

/// sigma, delta (strong accretivity of F w.r.t. S,T and H) and epsilon1,
/// epsilon2 (Lipschitz in each argument), in that order. sigma and delta are
/// certified against ||x-y||^q; the ||H(x)-H(y)||^q-normalized constants are
/// reported in the details as "h_normalized_constant".
std::vector<Certificate> certify_F_properties(const InclusionInstance& inst,
                                              const SamplePlan& samples);

/// x -> M(f(x), w): the f-slot of M with the g-slot frozen at w.
SingleValuedMap m_f_slot_map(const InclusionInstance& inst, const Vector& w);
/// x -> M(w, g(x)).
SingleValuedMap m_g_slot_map(const InclusionInstance& inst, const Vector& w);

struct SymmetricAccretiveResult {
  Certificate alpha;     ///< strongly_accretive through f
  Certificate beta;      ///< relaxed_accretive through g
  Certificate combined;  ///< symmetric_accretive: both hold and alpha >= beta
};
SymmetricAccretiveResult certify_symmetric_accretive(const InclusionInstance& inst,
                                                     const SamplePlan& samples);

/// (H + rho M(f,g))(X) = X for every rho in the grid. For affine instances
/// the pencil det(K + rho N) is additionally scanned for real roots rho > 0.
Certificate certify_surjectivity(const InclusionInstance& inst, const std::vector<double>& rho_grid,
                                 const SamplePlan& samples);

/// Symmetric accretivity of M plus surjectivity over the grid.
Certificate certify_generalized_mixed_accretive(const InclusionInstance& inst,
                                                const std::vector<double>& rho_grid,
                                                const SamplePlan& samples);

std::vector<double> default_rho_grid(const InclusionInstance& inst);

/// Every certificate that the instance's declared constants make checkable,
/// plus surjectivity.
struct CertificateBundle {
  std::string instance;
  std::vector<Certificate> certificates;
  std::vector<std::string> skipped;  ///< properties not checked, with reason
  std::vector<std::string> ordering_violations;
  std::optional<double> r;  ///< (mu1 alpha1^q - mu2 beta1^q) + (gamma1 + gamma2)
  std::optional<double> m;  ///< alpha - beta
  std::uint64_t seed = 0;

  bool all_ok() const;
};

CertificateBundle certify_instance(const InclusionInstance& inst, const SamplePlan& samples,
                                   const std::vector<double>& rho_grid);

/// Declared constants with every slot replaced by the certified best constant
/// where a certificate for it exists.
Constants certified_constants(const InclusionInstance& inst, const CertificateBundle& bundle);

/// r = (mu1 alpha1^q - mu2 beta1^q) + (gamma1 + gamma2) and m = alpha - beta.
std::pair<double, double> resolvent_constants(const Constants& k, double q);

}  // namespace vincl
