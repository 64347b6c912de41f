#include "vincl/solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace vincl {

std::string_view to_string(ConditionVerdict v) {
  switch (v) {
    case ConditionVerdict::satisfied: return "satisfied";
    case ConditionVerdict::violated_upper: return "violated_upper";
    case ConditionVerdict::violated_radicand: return "violated_radicand";
    case ConditionVerdict::violated_lower: return "violated_lower";
  }
  return "unknown";
}

namespace {

struct ConditionTerms {
  double tau_term, lipschitz_term, accretive_term, r, m;
  double radicand() const { return tau_term + lipschitz_term - accretive_term; }
};

ConditionTerms condition_terms(const InclusionInstance& inst, double rho, double multiplier) {
  const auto& k = inst.constants;
  const auto missing = k.missing({"tau", "sigma", "delta", "epsilon1", "epsilon2", "l1", "l2",
                                  "mu1", "gamma1", "mu2", "gamma2", "alpha1", "beta1", "alpha",
                                  "beta"});
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw Error(ErrorCode::missing_constants, "condition (vi) needs undeclared constants: " + list);
  }
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw Error(ErrorCode::invalid_argument, "condition (vi): rho must be > 0");
  }
  const double q = inst.space.q;
  const double tq = std::pow(*k.tau, q);
  const double lip = multiplier * (*k.epsilon1 * *k.l1 + *k.epsilon2 * *k.l2);
  const auto [r, m] = resolvent_constants(k, q);
  return {tq, inst.space.c_q * std::pow(rho, q) * std::pow(lip, q),
          rho * q * (*k.sigma + *k.delta) * tq, r, m};
}

}  // namespace

ConditionReport check_condition_vi(const InclusionInstance& inst, double rho) {
  const auto t = condition_terms(inst, rho, 1.0);
  ConditionReport rep;
  rep.q = inst.space.q;
  rep.c_q = inst.space.c_q;
  rep.rho = rho;
  rep.tau_term = t.tau_term;
  rep.lipschitz_term = t.lipschitz_term;
  rep.accretive_term = t.accretive_term;
  rep.radicand = t.radicand();
  rep.r = t.r;
  rep.m = t.m;
  rep.denominator = t.r + rho * t.m;

  // A radicand within rounding of zero violates the strict lower bound.
  const double slack = 1e-12 * (t.tau_term + t.lipschitz_term + t.accretive_term);
  if (rep.radicand < -slack) {
    rep.verdict = ConditionVerdict::violated_radicand;
    return rep;
  }
  rep.root = std::pow(std::max(rep.radicand, 0.0), 1.0 / rep.q);
  if (rep.denominator > 0.0) rep.theta = *rep.root / rep.denominator;
  if (rep.radicand <= slack) {
    rep.verdict = ConditionVerdict::violated_lower;
  } else if (!(*rep.root < rep.denominator)) {
    rep.verdict = ConditionVerdict::violated_upper;
  } else {
    rep.verdict = ConditionVerdict::satisfied;
  }
  return rep;
}

double theta(const InclusionInstance& inst, double rho, std::optional<std::size_t> n) {
  if (n && *n == 0) throw Error(ErrorCode::invalid_argument, "theta_n: n must be >= 1");
  const double multiplier = n ? 1.0 + 1.0 / static_cast<double>(*n) : 1.0;
  const auto t = condition_terms(inst, rho, multiplier);
  const double radicand = t.radicand();
  if (radicand < 0.0) {
    std::ostringstream os;
    os << "theta: radicand is negative (" << radicand << ") at rho=" << rho;
    throw Error(ErrorCode::invalid_argument, os.str());
  }
  const double denom = t.r + rho * t.m;
  if (!(denom > 0.0)) throw Error(ErrorCode::invalid_argument, "theta: r + rho m must be > 0");
  return std::pow(radicand, 1.0 / inst.space.q) / denom;
}

std::size_t nadler_select_index(const Vector& current, const PointSet& target_set) {
  if (target_set.empty()) throw Error(ErrorCode::empty_set, "nadler_select: empty target set");
  std::size_t best = 0;
  double best_d = distance(current, target_set[0]);
  for (std::size_t i = 1; i < target_set.size(); ++i) {
    const double d = distance(current, target_set[i]);
    if (d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

Vector nadler_select(const Vector& current, const PointSet& target_set) {
  return target_set[nadler_select_index(current, target_set)];
}

// Error sequence

ErrorSequence ErrorSequence::geometric(double c0, double factor, std::optional<Vector> direction) {
  ErrorSequence e;
  e.kind = Kind::geometric;
  e.c0 = c0;
  e.factor = factor;
  e.direction = std::move(direction);
  return e;
}

std::optional<double> ErrorSequence::varpi() const {
  if (kind == Kind::zero) return std::nullopt;
  return 0.5 * (1.0 + factor);
}

Vector ErrorSequence::at(std::size_t n, std::size_t dim) const {
  if (kind == Kind::zero || c0 == 0.0) return Vector::zeros(dim);
  const Vector d = direction ? *direction : Vector::constant(dim, 1.0);
  return d * (c0 * std::pow(factor, static_cast<double>(n)) / norm(d));
}

void ErrorSequence::validate(std::size_t dim) const {
  if (kind == Kind::zero) return;
  if (!std::isfinite(c0)) throw Error(ErrorCode::invalid_argument, "error sequence: c0 not finite");
  if (!(factor > 0.0 && factor < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "error sequence: factor must lie in (0,1)");
  }
  if (direction) {
    if (direction->dim() != dim) throw_dimension_mismatch("error direction", dim, direction->dim());
    if (norm(*direction) == 0.0) {
      throw Error(ErrorCode::invalid_argument, "error sequence: direction must be nonzero");
    }
  }
}

void SolverConfig::validate(std::size_t dim) const {
  if (rho && (!(*rho > 0.0) || !std::isfinite(*rho))) {
    throw Error(ErrorCode::invalid_argument, "solver: rho must be > 0");
  }
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw Error(ErrorCode::invalid_argument, "solver: tol must be > 0");
  }
  if (max_iters == 0) throw Error(ErrorCode::invalid_argument, "solver: max_iters must be >= 1");
  if (divergence_window == 0 || !(divergence_growth > 1.0)) {
    throw Error(ErrorCode::invalid_argument, "solver: invalid divergence guard");
  }
  if (z0 && z0->dim() != dim) throw_dimension_mismatch("solver z0", dim, z0->dim());
  if (u0 && u0->dim() != dim) throw_dimension_mismatch("solver u0", dim, u0->dim());
  errors.validate(dim);
}

// Iteration

double fixed_point_defect(const InclusionInstance& inst, const Resolvent& R, const Vector& u,
                          const Vector& v, const Vector& w) {
  const double rho = R.config().rho;
  const Vector z = eval_H_on_point(inst, u) - rho * inst.F(v, w) + rho * inst.omega;
  return distance(u, R(z));
}

namespace {

bool finite(const Vector& x) { return x.all_finite(); }

}  // namespace

SolveTrace solve(const InclusionInstance& inst, const SolverConfig& cfg) {
  inst.validate();
  const std::size_t dim = inst.dim();
  cfg.validate(dim);
  const double rho = cfg.rho.value_or(inst.rho);

  SolveTrace trace;
  trace.instance = inst.name;
  trace.rho = rho;
  trace.tol = cfg.tol;
  trace.max_iters = cfg.max_iters;
  trace.errors = cfg.errors;

  std::optional<ConditionReport> cond;
  try {
    cond = check_condition_vi(inst, rho);
    trace.summary.condition = cond->verdict;
    trace.summary.theta = cond->theta;
    if (!cond->satisfied()) {
      trace.warnings.push_back("condition (vi) " + std::string(to_string(cond->verdict)) +
                               " at this rho; convergence is not guaranteed");
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::missing_constants) throw;
    trace.warnings.push_back(std::string("condition (vi) not checked: ") + e.what());
  }
  auto theta_at = [&](std::size_t n) -> std::optional<double> {
    if (!cond || n == 0 || cond->verdict == ConditionVerdict::violated_radicand) return std::nullopt;
    try {
      return theta(inst, rho, n);
    } catch (const Error&) {
      return std::nullopt;
    }
  };

  ResolventConfig rcfg;
  rcfg.rho = rho;
  rcfg.solver = cfg.resolvent_solver;
  const Resolvent R(inst, rcfg);

  const double residual_bound = 10.0 * cfg.tol * (1.0 + norm(inst.omega));

  Vector z = cfg.z0 ? *cfg.z0 : Vector::constant(dim, 1.0);
  Vector u = cfg.u0 ? *cfg.u0 : R(z);
  const PointSet s0 = inst.S(u);
  const PointSet t0 = inst.T(u);
  std::size_t vi = nadler_select_index(u, s0);
  std::size_t wi = nadler_select_index(u, t0);
  Vector v = s0[vi];
  Vector w = t0[wi];

  auto push_row = [&](std::size_t n, std::optional<double> step, std::optional<double> ratio) {
    const auto res = inclusion_residual(inst, u, v, w);
    trace.rows.push_back(TraceRow{n, z, u, v, w, step, ratio, res.value, res.flagged(),
                                  theta_at(n), norm(cfg.errors.at(n, dim)), vi, wi});
  };
  auto diverged = [&](const std::string& why) {
    trace.summary.iterations = trace.rows.size() - 1;
    trace.summary.final_residual = trace.rows.back().residual;
    throw DivergenceError("solver diverged: " + why, trace);
  };

  push_row(0, std::nullopt, std::nullopt);
  std::vector<double> steps;

  for (std::size_t n = 0; n < cfg.max_iters; ++n) {
    const Vector e = cfg.errors.at(n, dim);
    z = eval_H_on_point(inst, u) - rho * inst.F(v, w) + rho * inst.omega + e;
    if (!finite(z)) diverged("non-finite iterate at n=" + std::to_string(n + 1));
    Vector u_next = R(z);
    if (!finite(u_next)) diverged("non-finite iterate at n=" + std::to_string(n + 1));
    const double step = distance(u_next, u);
    u = std::move(u_next);
    const PointSet sn = inst.S(u);
    const PointSet tn = inst.T(u);
    vi = nadler_select_index(v, sn);
    wi = nadler_select_index(w, tn);
    v = sn[vi];
    w = tn[wi];

    std::optional<double> ratio;
    if (!steps.empty() && steps.back() > 0.0) ratio = step / steps.back();
    steps.push_back(step);
    push_row(n + 1, step, ratio);

    if (!std::isfinite(step)) diverged("non-finite step at n=" + std::to_string(n + 1));
    const std::size_t k = steps.size();
    if (k > cfg.divergence_window) {
      const double earlier = steps[k - 1 - cfg.divergence_window];
      if (step > cfg.divergence_growth * std::max(earlier, cfg.tol)) {
        std::ostringstream os;
        os << "step grew from " << earlier << " to " << step << " over "
           << cfg.divergence_window << " iterations (n=" << n + 1 << ")";
        diverged(os.str());
      }
    }
    if (step <= cfg.tol && trace.rows.back().residual <= residual_bound) {
      trace.summary.converged = true;
      break;
    }
  }

  auto& sum = trace.summary;
  sum.iterations = trace.rows.size() - 1;
  sum.final_residual = trace.rows.back().residual;
  sum.final_error_norm = trace.rows.back().error_norm;
  sum.fixed_point_defect = fixed_point_defect(inst, R, u, v, w);

  double log_sum = 0.0;
  std::size_t count = 0;
  for (auto it = trace.rows.rbegin(); it != trace.rows.rend() && count < 10; ++it) {
    if (!it->ratio || !(*it->ratio > 0.0)) continue;
    log_sum += std::log(*it->ratio);
    ++count;
  }
  if (count > 0) sum.observed_rate = std::exp(log_sum / static_cast<double>(count));
  return trace;
}

}  // namespace vincl
