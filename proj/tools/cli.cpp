#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include "CLI11.hpp"
#include "vincl/certify.hpp"
#include "vincl/instance_io.hpp"
#include "vincl/instances.hpp"
#include "vincl/report.hpp"
#include "vincl/resolvent.hpp"
#include "vincl/solver.hpp"

namespace vincl::cli {

namespace {

struct Loaded {
  InclusionInstance instance;
  std::optional<NamedInstance> named;
};

Loaded load(const CliConfig& cfg) {
  if (cfg.instance_name.has_value() == cfg.instance_file.has_value()) {
    throw ParseError("exactly one of --instance and --instance-file is required", "");
  }
  if (cfg.instance_file) return {load_instance_file(*cfg.instance_file), std::nullopt};
  auto named = builtin_instance(*cfg.instance_name);
  if (!named) throw ParseError("unknown built-in instance '" + *cfg.instance_name + "'", "");
  InclusionInstance inst = named->instance;
  return {std::move(inst), std::move(named)};
}

// Write-then-rename so a reader never sees a partial file.
void emit(const CliConfig& cfg, std::ostream& out, const std::string& text) {
  if (!cfg.output) {
    out << text;
    out.flush();
    return;
  }
  const std::filesystem::path target(*cfg.output);
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::invalid_argument, "cannot write " + tmp.string());
    f << text;
    f.flush();
    if (!f) throw Error(ErrorCode::invalid_argument, "write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorCode::invalid_argument, "cannot rename onto " + target.string());
  }
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

std::string fmt(const std::optional<double>& x) { return x ? fmt(*x) : std::string("-"); }

std::string fmt(const Vector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.dim(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + ")";
}

Vector vector_arg(const std::vector<double>& xs, std::size_t dim, const char* flag) {
  if (xs.size() != dim) {
    throw ParseError("expected " + std::to_string(dim) + " values, got " +
                         std::to_string(xs.size()),
                     flag);
  }
  return Vector(xs);
}

SamplePlan plan_of(const CliConfig& cfg) {
  SamplePlan p;
  p.seed = cfg.seed;
  p.pairs = cfg.samples;
  return p;
}

// list-instances

int list_instances(const CliConfig& cfg, std::ostream& out) {
  const Format format = cfg.format.value_or(Format::human);
  nlohmann::json arr = nlohmann::json::array();
  std::ostringstream human;
  std::ostringstream csv;
  csv << "name,dim,rho\n";
  for (const auto& name : builtin_names()) {
    const auto n = *builtin_instance(name);
    arr.push_back({{"name", n.name},
                   {"description", n.description},
                   {"dim", n.instance.dim()},
                   {"rho", n.instance.rho}});
    human << std::left << std::setw(28) << n.name << " dim=" << n.instance.dim()
          << "  rho=" << fmt(n.instance.rho) << "  " << n.description << "\n";
    csv << n.name << "," << n.instance.dim() << "," << fmt(n.instance.rho) << "\n";
  }
  switch (format) {
    case Format::json: emit(cfg, out, dump(arr)); break;
    case Format::csv: emit(cfg, out, csv.str()); break;
    case Format::human: emit(cfg, out, human.str()); break;
  }
  return exit_code::ok;
}

// verify

int verify(const CliConfig& cfg, std::ostream& out) {
  Loaded l = load(cfg);
  if (cfg.rho) l.instance.rho = *cfg.rho;
  const auto grid = default_rho_grid(l.instance);
  const auto bundle = certify_instance(l.instance, plan_of(cfg), grid);

  nlohmann::json doc{{"bundle", to_json(bundle)}, {"rho_grid", grid}};
  std::vector<ExpectationOutcome> outcomes;
  if (l.named) {
    outcomes = evaluate_expectations(*l.named, bundle);
    doc["expectations"] = to_json(outcomes);
  }

  std::string text;
  switch (cfg.format.value_or(Format::json)) {
    case Format::json: text = dump(doc); break;
    case Format::csv: {
      text = "property,subject,claimed,constant,method,verdict\n";
      for (const auto& c : bundle.certificates) {
        text += std::string(to_string(c.property)) + ",\"" + c.subject + "\"," + fmt(c.claimed) +
                "," + fmt(c.constant) + "," + std::string(to_string(c.method)) + "," +
                std::string(to_string(c.verdict)) + "\n";
      }
      break;
    }
    case Format::human: {
      std::ostringstream os;
      os << "instance " << bundle.instance << "  (seed " << bundle.seed << ")\n";
      for (const auto& c : bundle.certificates) {
        os << "  " << std::left << std::setw(9) << to_string(c.verdict) << std::setw(30)
           << to_string(c.property) << std::setw(22) << c.subject << " constant "
           << fmt(c.constant) << "  claimed " << fmt(c.claimed) << "  [" << to_string(c.method)
           << "]\n";
        if (c.verdict == Verdict::fail) os << "           witness: " << c.witness.summary << "\n";
      }
      for (const auto& s : bundle.skipped) os << "  skipped  " << s << "\n";
      for (const auto& v : bundle.ordering_violations) os << "  ordering violated: " << v << "\n";
      if (bundle.r && bundle.m) os << "  r = " << fmt(*bundle.r) << ", m = " << fmt(*bundle.m) << "\n";
      os << (bundle.all_ok() ? "all declared constants verified\n"
                             : "some declared property does not hold\n");
      text = os.str();
      break;
    }
  }
  emit(cfg, out, text);
  return bundle.all_ok() ? exit_code::ok : exit_code::expectation_unmet;
}

// check-condition

std::string condition_human(const InclusionInstance& inst, const ConditionReport& r) {
  const auto& k = inst.constants;
  std::ostringstream os;
  os << "condition (vi) for " << inst.name << " at rho = " << fmt(r.rho) << ", q = " << fmt(r.q)
     << ", c_q = " << fmt(r.c_q) << "\n";
  os << "  tau^q                              = " << fmt(*k.tau) << "^q = " << fmt(r.tau_term)
     << "\n";
  os << "  c_q rho^q (eps1 l1 + eps2 l2)^q    = " << fmt(r.lipschitz_term) << "   (eps1="
     << fmt(*k.epsilon1) << ", l1=" << fmt(*k.l1) << ", eps2=" << fmt(*k.epsilon2)
     << ", l2=" << fmt(*k.l2) << ")\n";
  os << "  rho q (sigma + delta) tau^q        = " << fmt(r.accretive_term) << "   (sigma="
     << fmt(*k.sigma) << ", delta=" << fmt(*k.delta) << ")\n";
  os << "  radicand                           = " << fmt(r.radicand) << "\n";
  os << "  q-th root                          = " << fmt(r.root) << "\n";
  os << "  r = (mu1 alpha1^q - mu2 beta1^q) + (gamma1 + gamma2) = " << fmt(r.r) << "\n";
  os << "  m = alpha - beta                   = " << fmt(r.m) << "\n";
  os << "  r + rho m                          = " << fmt(r.denominator) << "\n";
  os << "  theta = root / (r + rho m)         = " << fmt(r.theta) << "\n";
  os << "  verdict: " << to_string(r.verdict) << "\n";
  return os.str();
}

int check_condition(const CliConfig& cfg, std::ostream& out) {
  const Loaded l = load(cfg);
  const double rho = cfg.rho.value_or(l.instance.rho);
  const auto report = check_condition_vi(l.instance, rho);
  std::string text;
  switch (cfg.format.value_or(Format::json)) {
    case Format::json: {
      auto j = to_json(report);
      j["instance"] = l.instance.name;
      text = dump(j);
      break;
    }
    case Format::csv:
      text = "instance,rho,tau_term,lipschitz_term,accretive_term,radicand,root,r,m,r_plus_rho_m,"
             "theta,verdict\n" +
             l.instance.name + "," + fmt(rho) + "," + fmt(report.tau_term) + "," +
             fmt(report.lipschitz_term) + "," + fmt(report.accretive_term) + "," +
             fmt(report.radicand) + "," + fmt(report.root) + "," + fmt(report.r) + "," +
             fmt(report.m) + "," + fmt(report.denominator) + "," + fmt(report.theta) + "," +
             std::string(to_string(report.verdict)) + "\n";
      break;
    case Format::human: text = condition_human(l.instance, report); break;
  }
  emit(cfg, out, text);
  return report.satisfied() ? exit_code::ok : exit_code::condition_violated;
}

// solve / trace-export

std::string trace_human(const SolveTrace& t) {
  const auto& s = t.summary;
  std::ostringstream os;
  os << "solve " << t.instance << " at rho = " << fmt(t.rho) << ", tol = " << fmt(t.tol) << "\n";
  for (const auto& w : t.warnings) os << "  warning: " << w << "\n";
  const std::size_t shown = 12;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.rows.size() > 2 * shown && i == shown) {
      os << "  ...\n";
      i = t.rows.size() - shown;
    }
    const auto& r = t.rows[i];
    os << "  n=" << std::left << std::setw(5) << r.n << " step " << std::setw(16) << fmt(r.step)
       << " ratio " << std::setw(14) << fmt(r.ratio) << " theta_n " << std::setw(14)
       << fmt(r.theta_n) << " residual " << fmt(r.residual) << "\n";
  }
  os << (s.converged ? "converged" : "not converged") << " after " << s.iterations
     << " iterations\n";
  os << "  u = " << fmt(t.last().u) << "\n";
  os << "  final residual      " << fmt(s.final_residual) << "\n";
  os << "  fixed-point defect  " << fmt(s.fixed_point_defect) << "\n";
  os << "  observed rate       " << fmt(s.observed_rate) << "\n";
  os << "  theta               " << fmt(s.theta) << "\n";
  if (s.condition) os << "  condition (vi)      " << to_string(*s.condition) << "\n";
  return os.str();
}

int solve_cmd(const CliConfig& cfg, std::ostream& out, std::ostream& err, Format default_format) {
  const Loaded l = load(cfg);
  const std::size_t dim = l.instance.dim();
  SolverConfig sc;
  sc.rho = cfg.rho;
  sc.tol = cfg.tol;
  sc.max_iters = cfg.max_iters;
  if (cfg.z0) sc.z0 = vector_arg(*cfg.z0, dim, "--z0");
  if (cfg.error_c0) {
    std::optional<Vector> dir;
    if (cfg.error_direction) dir = vector_arg(*cfg.error_direction, dim, "--error-direction");
    sc.errors = ErrorSequence::geometric(*cfg.error_c0, cfg.error_factor, dir);
  }

  const Format format = cfg.format.value_or(default_format);
  auto render = [&](const SolveTrace& t) {
    switch (format) {
      case Format::json: return dump(to_json(t));
      case Format::csv: return trace_to_csv(t);
      case Format::human: return trace_human(t);
    }
    return std::string();
  };

  try {
    const SolveTrace t = solve(l.instance, sc);
    emit(cfg, out, render(t));
    if (!t.summary.converged) {
      err << "vincl: no convergence within " << t.max_iters << " iterations\n";
      return exit_code::not_converged;
    }
    return exit_code::ok;
  } catch (const DivergenceError& e) {
    emit(cfg, out, render(e.trace()));
    err << "vincl: " << e.what() << "\n";
    return exit_code::not_converged;
  } catch (const ConvergenceError& e) {
    err << "vincl: " << e.what() << "\n";
    return exit_code::not_converged;
  }
}

}  // namespace

int run(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.subcommand == "list-instances") return list_instances(cfg, out);
    if (cfg.subcommand == "verify") return verify(cfg, out);
    if (cfg.subcommand == "check-condition") return check_condition(cfg, out);
    if (cfg.subcommand == "solve") return solve_cmd(cfg, out, err, Format::json);
    if (cfg.subcommand == "trace-export") return solve_cmd(cfg, out, err, Format::csv);
    err << "vincl: unknown subcommand '" << cfg.subcommand << "'\n";
    return exit_code::parse_error;
  } catch (const NonSurjectiveError& e) {
    err << "vincl: " << e.what() << "\n";
    return exit_code::non_surjective;
  } catch (const Error& e) {
    err << "vincl: " << e.what() << "\n";
    return exit_code::parse_error;
  }
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Proximal-point solver and operator-constant certifier for variational inclusions",
               "vincl"};
  app.require_subcommand(1);
  CliConfig cfg;
  std::string format;

  auto add_instance = [&](CLI::App* sub) {
    auto* name = sub->add_option("--instance", cfg.instance_name, "built-in instance name");
    auto* file = sub->add_option("--instance-file", cfg.instance_file, "instance JSON file");
    name->excludes(file);
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("-o,--output", cfg.output, "write the result here (atomically)");
    sub->add_option("--format", format, "json | csv | human")
        ->check(CLI::IsMember({"json", "csv", "human"}));
  };
  auto add_solver = [&](CLI::App* sub) {
    add_instance(sub);
    add_output(sub);
    sub->add_option("--rho", cfg.rho, "step parameter rho > 0");
    sub->add_option("--tol", cfg.tol, "stop when ||u_{n+1} - u_n|| <= tol");
    sub->add_option("--max-iters", cfg.max_iters, "iteration cap");
    sub->add_option("--z0", cfg.z0, "starting point z0")->expected(1, -1)->delimiter(',');
    sub->add_option("--error-c0", cfg.error_c0, "geometric error sequence amplitude");
    sub->add_option("--error-factor", cfg.error_factor, "geometric error decay in (0,1)");
    sub->add_option("--error-direction", cfg.error_direction, "error direction")
        ->expected(1, -1)
        ->delimiter(',');
  };

  auto* solve_app = app.add_subcommand("solve", "run the proximal-point iteration");
  add_solver(solve_app);
  auto* trace_app = app.add_subcommand("trace-export", "run the iteration and export the trace");
  add_solver(trace_app);

  auto* verify_app = app.add_subcommand("verify", "certify every declared operator constant");
  add_instance(verify_app);
  add_output(verify_app);
  verify_app->add_option("--seed", cfg.seed, "sample seed");
  verify_app->add_option("--samples", cfg.samples, "random sample pairs");
  verify_app->add_option("--rho", cfg.rho, "rho added to the surjectivity grid");

  auto* cond_app = app.add_subcommand("check-condition", "evaluate the convergence condition");
  add_instance(cond_app);
  add_output(cond_app);
  cond_app->add_option("--rho", cfg.rho, "step parameter rho > 0");

  auto* list_app = app.add_subcommand("list-instances", "list built-in instances");
  add_output(list_app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help requests exit 0; everything else is a command-line error.
    return app.exit(e, out, err) == 0 ? exit_code::ok : exit_code::parse_error;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (format == "json") cfg.format = Format::json;
  if (format == "csv") cfg.format = Format::csv;
  if (format == "human") cfg.format = Format::human;
  return run(cfg, out, err);
}

}  // namespace vincl::cli
