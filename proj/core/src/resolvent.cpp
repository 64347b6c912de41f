#include "vincl/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SVD>

namespace vincl {

void ResolventConfig::validate() const {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw Error(ErrorCode::invalid_argument, "ResolventConfig: rho must be > 0");
  }
  if (!(inner_tol > 0.0) || !std::isfinite(inner_tol)) {
    throw Error(ErrorCode::invalid_argument, "ResolventConfig: inner_tol must be > 0");
  }
  if (max_inner_iters == 0) {
    throw Error(ErrorCode::invalid_argument, "ResolventConfig: max_inner_iters must be >= 1");
  }
}

CompositeAnalysis analyze_composite(const CompositeAffine& composite, double rho) {
  CompositeAnalysis a{composite.linear(rho), Vector::unchecked(composite.offset(rho).eigen()),
                      0.0, 0.0, 0.0, 0.0, 0, false, {}, std::nullopt};
  const auto n = a.linear.rows();
  Eigen::JacobiSVD<Matrix> svd(a.linear);
  const auto& s = svd.singularValues();
  a.sigma_max = s.size() > 0 ? s[0] : 0.0;
  a.sigma_min = s.size() > 0 ? s[s.size() - 1] : 0.0;
  a.condition_number =
      a.sigma_min > 0.0 ? a.sigma_max / a.sigma_min : std::numeric_limits<double>::infinity();
  a.determinant = a.linear.determinant();
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > a.sigma_max * 1e-12) ++a.rank;
  }

  const double det_floor = 1e-12 * std::pow(a.sigma_max, static_cast<double>(n));
  a.singular = a.sigma_max == 0.0 || a.condition_number > kSingularConditionNumber ||
               std::abs(a.determinant) < det_floor;
  if (!a.singular) return a;

  std::ostringstream os;
  if (a.sigma_max == 0.0) {
    a.image_norm = norm(a.offset);
    a.rank = 0;
    os << "zero linear part: image is the single point c with ||c|| = " << *a.image_norm;
  } else {
    os << "rank " << a.rank << " < " << n << " (condition number " << a.condition_number
       << "): image is a proper affine subspace";
  }
  a.defect = os.str();
  return a;
}

namespace {

// Lipschitz constant of x -> M(f(x), g(x)) (first member), exact when the
// composite is affine, otherwise a small fixed-seed sampled estimate.
double m_lipschitz_estimate(const InclusionInstance& inst) {
  if (const auto comp = composite_affine(inst)) {
    Eigen::JacobiSVD<Matrix> svd(comp->m_linear);
    return svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
  }
  SamplePlan plan;
  plan.seed = 0x5eedULL;
  plan.pairs = 32;
  plan.include_lattice = false;
  double worst = 0.0;
  for (const auto& p : generate_pairs(plan, inst.dim())) {
    const double d = distance(p.x, p.y);
    if (d == 0.0) continue;
    const Vector mx = eval_M_on_point(inst, p.x).front();
    const Vector my = eval_M_on_point(inst, p.y).front();
    worst = std::max(worst, distance(mx, my) / d);
  }
  return worst;
}

}  // namespace

Resolvent::Resolvent(const InclusionInstance& inst, ResolventConfig cfg)
    : inst_(&inst), cfg_(cfg) {
  cfg_.validate();
  inst.validate();

  const auto comp = composite_affine(inst);
  const bool want_exact = cfg_.solver == ResolventSolver::exact_affine ||
                          (cfg_.solver == ResolventSolver::automatic && comp.has_value());
  if (want_exact) {
    if (!comp) {
      throw Error(ErrorCode::invalid_argument,
                  "Resolvent: exact_affine solver requested for a non-affine instance");
    }
    const auto a = analyze_composite(*comp, cfg_.rho);
    if (a.singular) throw NonSurjectiveError(a.defect, cfg_.rho, a.image_norm);
    lu_.emplace(a.linear);
    offset_ = a.offset;
    condition_ = a.condition_number;
    return;
  }

  if (const auto tau = inst.constants.tau) {
    const double denom = *tau + cfg_.rho * m_lipschitz_estimate(inst);
    if (denom > 0.0 && std::isfinite(denom)) damping_ = 1.0 / denom;
  }
}

Vector Resolvent::operator()(const Vector& z) const {
  if (z.dim() != inst_->dim()) throw_dimension_mismatch("Resolvent", inst_->dim(), z.dim());
  if (lu_) {
    const Eigen::VectorXd x = lu_->solve(z.eigen() - offset_->eigen());
    if (!x.allFinite()) {
      throw Error(ErrorCode::non_finite, "Resolvent: exact solve produced non-finite values");
    }
    return Vector::unchecked(x);
  }
  return solve_damped(z);
}

// x <- x - lambda (forward(x) - z), halving lambda whenever the residual grows.
Vector Resolvent::solve_damped(const Vector& z) const {
  const double target = cfg_.inner_tol * (1.0 + norm(z));
  Vector x = Vector::zeros(z.dim());
  Vector r = forward(*inst_, cfg_.rho, x, z) - z;
  double res = norm(r);
  double lambda = damping_;
  for (std::size_t it = 0; it < cfg_.max_inner_iters; ++it) {
    if (res <= target) return x;
    const Vector trial = x - lambda * r;
    const Vector trial_r = forward(*inst_, cfg_.rho, trial, z) - z;
    const double trial_res = norm(trial_r);
    if (!std::isfinite(trial_res) || trial_res > res) {
      lambda *= 0.5;
      if (lambda < 1e-300) break;
      continue;
    }
    x = trial;
    r = trial_r;
    res = trial_res;
  }
  if (res <= target) return x;
  std::ostringstream os;
  os << "damped resolvent did not reach tolerance " << target << " within "
     << cfg_.max_inner_iters << " iterations (residual " << res << ")";
  throw ConvergenceError(os.str(), res, cfg_.max_inner_iters);
}

Vector resolve(const InclusionInstance& inst, const ResolventConfig& cfg, const Vector& z) {
  return Resolvent(inst, cfg)(z);
}

Vector forward(const InclusionInstance& inst, double rho, const Vector& x,
               const std::optional<Vector>& target) {
  PointSet image = forward_image(inst, rho, x);
  if (!target || image.size() == 1) return std::move(image.front());
  std::size_t best = 0;
  double best_d = distance(image[0], *target);
  for (std::size_t i = 1; i < image.size(); ++i) {
    const double d = distance(image[i], *target);
    if (d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return std::move(image[best]);
}

AuditReport audit_lipschitz(const InclusionInstance& inst, const ResolventConfig& cfg,
                            const SamplePlan& pairs) {
  AuditReport report;
  report.q = inst.space.q;
  report.rho = cfg.rho;
  report.seed = pairs.seed;
  const auto [r, m] = resolvent_constants(inst.constants, inst.space.q);
  report.r = r;
  report.m = m;
  const double denom = r + cfg.rho * m;
  report.bound = denom > 0.0 ? 1.0 / denom : std::numeric_limits<double>::infinity();
  report.bound_applicable = inst.space.q == 2.0 && denom > 0.0;

  const Resolvent R(inst, cfg);
  for (const auto& p : generate_pairs(pairs, inst.dim())) {
    const double d = distance(p.x, p.y);
    if (d == 0.0) {
      ++report.pairs_skipped;
      continue;
    }
    const double ratio = distance(R(p.x), R(p.y)) / d;
    ++report.pairs_checked;
    if (ratio > report.worst_ratio || !report.worst_u) {
      report.worst_ratio = ratio;
      report.worst_u = p.x;
      report.worst_v = p.y;
    }
  }
  report.pass = report.pairs_checked > 0 && report.worst_ratio <= report.bound + 1e-9;
  return report;
}

}  // namespace vincl
