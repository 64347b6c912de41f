#include "vincl/report.hpp"

#include <charconv>
#include <cmath>

namespace vincl {

using nlohmann::json;

namespace {

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json opt(const std::optional<double>& x) { return x ? num(*x) : json(nullptr); }

json opt(const std::optional<Vector>& v) { return v ? to_json(*v) : json(nullptr); }

// Shortest round-trip representation.
std::string cell(double x) {
  if (!std::isfinite(x)) return "";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string cell(const std::optional<double>& x) { return x ? cell(*x) : std::string(); }

}  // namespace

json to_json(const Vector& v) {
  json out = json::array();
  for (double x : v.coords()) out.push_back(num(x));
  return out;
}

json to_json(const Certificate& c) {
  json details = json::array();
  for (const auto& [k, v] : c.details) details.push_back(json{{"key", k}, {"value", num(v)}});
  return json{
      {"property", to_string(c.property)},
      {"subject", c.subject},
      {"claimed", opt(c.claimed)},
      {"constant", num(c.constant)},
      {"method", to_string(c.method)},
      {"verdict", to_string(c.verdict)},
      {"witness",
       json{{"summary", c.witness.summary},
            {"x", opt(c.witness.x)},
            {"y", opt(c.witness.y)},
            {"lhs", num(c.witness.lhs)},
            {"rhs", num(c.witness.rhs)}}},
      {"seed", c.seed ? json(*c.seed) : json(nullptr)},
      {"samples_checked", c.samples_checked},
      {"details", std::move(details)},
  };
}

json to_json(const CertificateBundle& b) {
  json certs = json::array();
  for (const auto& c : b.certificates) certs.push_back(to_json(c));
  return json{
      {"instance", b.instance},
      {"seed", b.seed},
      {"all_ok", b.all_ok()},
      {"certificates", std::move(certs)},
      {"skipped", b.skipped},
      {"ordering_violations", b.ordering_violations},
      {"r", opt(b.r)},
      {"m", opt(b.m)},
  };
}

json to_json(const AuditReport& a) {
  return json{
      {"q", num(a.q)},
      {"rho", num(a.rho)},
      {"r", num(a.r)},
      {"m", num(a.m)},
      {"bound", num(a.bound)},
      {"worst_ratio", num(a.worst_ratio)},
      {"worst_u", opt(a.worst_u)},
      {"worst_v", opt(a.worst_v)},
      {"pairs_checked", a.pairs_checked},
      {"pairs_skipped", a.pairs_skipped},
      {"pass", a.pass},
      {"bound_applicable", a.bound_applicable},
      {"seed", a.seed},
  };
}

json to_json(const ConditionReport& r) {
  return json{
      {"q", num(r.q)},
      {"c_q", num(r.c_q)},
      {"rho", num(r.rho)},
      {"terms",
       json{{"tau^q", num(r.tau_term)},
            {"c_q rho^q (eps1 l1 + eps2 l2)^q", num(r.lipschitz_term)},
            {"rho q (sigma + delta) tau^q", num(r.accretive_term)}}},
      {"radicand", num(r.radicand)},
      {"root", opt(r.root)},
      {"r", num(r.r)},
      {"m", num(r.m)},
      {"r_plus_rho_m", num(r.denominator)},
      {"theta", opt(r.theta)},
      {"verdict", to_string(r.verdict)},
  };
}

json to_json(const SolveTrace& t, bool include_rows) {
  const auto& s = t.summary;
  json errors{{"kind", t.errors.kind == ErrorSequence::Kind::zero ? "zero" : "geometric"}};
  if (t.errors.kind == ErrorSequence::Kind::geometric) {
    errors["c0"] = num(t.errors.c0);
    errors["factor"] = num(t.errors.factor);
    errors["varpi"] = opt(t.errors.varpi());
    errors["direction"] = opt(t.errors.direction);
  }
  const auto& last = t.last();
  json out{
      {"instance", t.instance},
      {"rho", num(t.rho)},
      {"tol", num(t.tol)},
      {"max_iters", t.max_iters},
      {"errors", std::move(errors)},
      {"warnings", t.warnings},
      {"summary",
       json{{"converged", s.converged},
            {"iterations", s.iterations},
            {"final_residual", num(s.final_residual)},
            {"observed_rate", opt(s.observed_rate)},
            {"theta", opt(s.theta)},
            {"condition", s.condition ? json(to_string(*s.condition)) : json(nullptr)},
            {"fixed_point_defect", num(s.fixed_point_defect)},
            {"final_error_norm", num(s.final_error_norm)},
            {"u", to_json(last.u)},
            {"v", to_json(last.v)},
            {"w", to_json(last.w)}}},
  };
  if (include_rows) {
    json rows = json::array();
    for (const auto& r : t.rows) {
      rows.push_back(json{{"n", r.n},
                          {"z", to_json(r.z)},
                          {"u", to_json(r.u)},
                          {"v", to_json(r.v)},
                          {"w", to_json(r.w)},
                          {"step", opt(r.step)},
                          {"ratio", opt(r.ratio)},
                          {"residual", num(r.residual)},
                          {"residual_flagged", r.residual_flagged},
                          {"theta_n", opt(r.theta_n)},
                          {"error_norm", num(r.error_norm)},
                          {"v_index", r.v_index},
                          {"w_index", r.w_index}});
    }
    out["rows"] = std::move(rows);
  }
  return out;
}

json to_json(const std::vector<ExpectationOutcome>& outcomes) {
  json out = json::array();
  for (const auto& o : outcomes) {
    const auto& e = *o.expectation;
    out.push_back(json{
        {"property", to_string(e.property)},
        {"subject", e.subject},
        {"expected_constant", opt(e.constant)},
        {"expected_verdict", to_string(e.verdict)},
        {"source", to_string(e.source)},
        {"constant", o.certificate ? num(o.certificate->constant) : json(nullptr)},
        {"verdict", o.certificate ? json(to_string(o.certificate->verdict)) : json(nullptr)},
        {"met", o.met},
    });
  }
  return out;
}

std::string trace_to_csv(const SolveTrace& t) {
  const std::size_t dim = t.rows.empty() ? 0 : t.rows.front().u.dim();
  std::string out = "n,step,ratio,residual,theta_n,error_norm";
  for (std::size_t i = 1; i <= dim; ++i) out += ",u" + std::to_string(i);
  out += ",schema\n";
  for (const auto& r : t.rows) {
    out += std::to_string(r.n);
    for (const auto& c : {cell(r.step), cell(r.ratio), cell(r.residual), cell(r.theta_n),
                          cell(r.error_norm)}) {
      out += ',';
      out += c;
    }
    for (double x : r.u.coords()) {
      out += ',';
      out += cell(x);
    }
    out += ',';
    out += kTraceSchema;
    out += '\n';
  }
  return out;
}

}  // namespace vincl
