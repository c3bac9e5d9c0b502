// Command-line front end: list | check | rigidity | geodesic | parse-eval.
//
// Exit codes: 0 all verdicts pass (or geodesic completed), 1 some verdict
// failed, 2 usage / unknown metric / parse error, 3 numeric failure.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>

#include "finsler/errors.hpp"
#include "finsler/expr.hpp"
#include "finsler/report.hpp"

namespace {

using namespace finsler;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct Globals {
  std::uint64_t seed = 1;
  int samples = 200;
  int dim = 2;
  double radius = 0.8;
  std::string region = "ball";
  std::string format = "json";
  Tolerances tol;
  bool fd_check = false;
  bool timing = false;
  std::string expr;
  std::string expr_kind = "complex";
  int expr_dim = 0;  // 0: fall back to --dim
  std::string expr_params;
};

MetricKind parse_kind(const std::string& s) {
  if (s == "real") return MetricKind::Real;
  if (s == "complex") return MetricKind::Complex;
  throw UsageError("--expr-kind must be real or complex");
}

SampleSpec sample_spec(const Globals& g) {
  SampleSpec s;
  s.seed = g.seed;
  s.count = g.samples;
  s.radius = g.radius;
  if (g.region == "ball") {
    s.region = BaseRegion::Ball;
  } else if (g.region == "box") {
    s.region = BaseRegion::Box;
  } else {
    throw UsageError("--region must be ball or box");
  }
  return s;
}

// positionals: [metric-name] [name=value ...]; the name is optional with --expr.
MetricRequest metric_request(const Globals& g, const std::vector<std::string>& positionals) {
  MetricRequest req;
  req.dim = g.dim;
  for (const auto& p : positionals) {
    if (p.find('=') != std::string::npos) {
      for (const auto& [k, v] : parse_assignments(p)) req.overrides[k] = v;
    } else if (req.zoo_name.empty()) {
      req.zoo_name = p;
    } else {
      throw UsageError("unexpected argument '" + p + "'");
    }
  }
  if (!g.expr.empty()) {
    if (!req.zoo_name.empty()) throw UsageError("give either a metric name or --expr, not both");
    ExprRequest e;
    e.source = g.expr;
    e.kind = parse_kind(g.expr_kind);
    e.dim = g.expr_dim > 0 ? g.expr_dim : g.dim;
    for (const auto& [k, v] : parse_assignments(g.expr_params)) {
      e.param_names.push_back(k);
      e.param_values.push_back(v);
    }
    req.expr = std::move(e);
  } else if (req.zoo_name.empty()) {
    throw UsageError("no metric given (name from `list`, or --expr)");
  }
  return req;
}

void emit(const Globals& g, const nlohmann::ordered_json& json, const std::string& text) {
  if (g.format == "text") {
    std::cout << text;
  } else {
    std::cout << json.dump(2) << "\n";
    std::cerr << text;
  }
}

// "--name v1,v2" or "--name=v1,v2" pairs left over by the parser become sweeps.
std::vector<Sweep> parse_sweeps(const std::vector<std::string>& extras) {
  std::vector<Sweep> sweeps;
  for (std::size_t k = 0; k < extras.size(); ++k) {
    std::string flag = extras[k];
    if (flag.rfind("--", 0) != 0) throw UsageError("unexpected argument '" + flag + "'");
    flag = flag.substr(2);
    std::string values;
    if (const auto eq = flag.find('='); eq != std::string::npos) {
      values = flag.substr(eq + 1);
      flag = flag.substr(0, eq);
    } else {
      if (k + 1 >= extras.size()) throw UsageError("--" + flag + " needs a value list");
      values = extras[++k];
    }
    sweeps.push_back({flag, parse_number_list(values)});
  }
  return sweeps;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of projective and dual flatness for real and complex Finsler metrics"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "PRNG seed")->capture_default_str();
  app.add_option("--samples", g.samples, "number of seeded samples")->capture_default_str();
  app.add_option("--dim", g.dim, "complex dimension n (real metrics: m)")->capture_default_str();
  app.add_option("--radius", g.radius, "sampling ball radius / box half-width")->capture_default_str();
  app.add_option("--region", g.region, "ball | box")->capture_default_str();
  app.add_option("--format", g.format, "json | text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  app.add_option("--tol-homog", g.tol.homog, "homogeneity / Euler tolerance (relative)")->capture_default_str();
  app.add_option("--tol-posdef", g.tol.posdef, "minimum eigenvalue counted as positive")->capture_default_str();
  app.add_option("--tol-flat", g.tol.flat, "relative residual at or below: flat")->capture_default_str();
  app.add_option("--tol-nonflat", g.tol.nonflat, "relative residual at or above: non-flat")->capture_default_str();
  app.add_option("--tol-fd", g.tol.fd, "autodiff vs finite differences tolerance")->capture_default_str();
  app.add_flag("--fd-check", g.fd_check, "compare jets against central differences");
  app.add_flag("--timing", g.timing, "include wall time in JSON (breaks byte-for-byte reproducibility)");
  app.add_option("--expr", g.expr, "DSL definition of a custom metric");
  app.add_option("--expr-kind", g.expr_kind, "real | complex")->capture_default_str();
  app.add_option("--expr-dim", g.expr_dim, "dimension of the --expr metric (default --dim)");
  app.add_option("--expr-params", g.expr_params, "parameters of the --expr metric, e.g. t=0.2,c=1");

  auto* list = app.add_subcommand("list", "list built-in metrics and their claimed properties");

  std::vector<std::string> check_args;
  auto* check = app.add_subcommand("check", "axiom, flatness and oracle checks on seeded samples");
  check->add_option("metric", check_args, "metric name followed by optional name=value overrides");

  std::vector<std::string> rig_args;
  auto* rigidity = app.add_subcommand("rigidity", "rigidity scan, optionally sweeping parameters (--t 0.1,0.2)");
  rigidity->add_option("metric", rig_args, "metric name followed by optional name=value overrides");

  std::vector<std::string> geo_args;
  std::string x0_text, u0_text, out_path;
  double horizon = 1.0;
  int steps = 1000;
  auto* geodesic = app.add_subcommand("geodesic", "integrate a geodesic with RK4; CSV to stdout");
  geodesic->add_option("metric", geo_args, "metric name followed by optional name=value overrides");
  geodesic->add_option("--x0", x0_text, "initial point, comma separated")->required();
  geodesic->add_option("--u0", u0_text, "initial velocity, comma separated")->required();
  geodesic->add_option("--T", horizon, "horizon")->capture_default_str();
  geodesic->add_option("--N", steps, "number of RK4 steps")->capture_default_str();
  geodesic->add_option("--out", out_path, "write the CSV here instead of stdout");

  std::string x_text, u_text;
  auto* parse_eval = app.add_subcommand("parse-eval", "parse --expr and evaluate it at packed real coordinates");
  parse_eval->add_option("--x", x_text, "base point (complex: Re parts then Im parts)")->required();
  parse_eval->add_option("--u", u_text, "tangent vector, same packing")->required();

  // Rigidity sweeps use the parameter name as a flag (--t 0.1,0.2), which no
  // parser can know in advance; lift them out before CLI11 sees the arguments.
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::string> sweep_args;
  if (const auto it = std::find(args.begin(), args.end(), "rigidity"); it != args.end()) {
    std::vector<std::string> kept(args.begin(), std::next(it));
    for (auto a = std::next(it); a != args.end(); ++a) {
      const bool is_flag = a->rfind("--", 0) == 0 && a->size() > 2;
      const std::string name = is_flag ? a->substr(0, a->find('=')) : std::string();
      if (is_flag && !app.get_option_no_throw(name) && !rigidity->get_option_no_throw(name) && name != "--help") {
        sweep_args.push_back(*a);
        if (a->find('=') == std::string::npos && std::next(a) != args.end()) sweep_args.push_back(*++a);
      } else {
        kept.push_back(*a);
      }
    }
    args = std::move(kept);
  }
  std::reverse(args.begin(), args.end());

  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*list) {
      std::cout << cmd_list();
      return 0;
    }
    if (*check) {
      const auto start = std::chrono::steady_clock::now();
      const MetricField metric = resolve_metric(metric_request(g, check_args));
      CheckOptions opts{sample_spec(g), g.tol, g.fd_check};
      ResidualReport rep = cmd_check(metric, opts);
      if (g.timing) {
        rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      }
      emit(g, to_json(rep), to_text(rep));
      if (rep.sample_errors > 0) return kExitNumeric;
      return rep.all_pass() ? 0 : kExitFail;
    }
    if (*rigidity) {
      const MetricRequest req = metric_request(g, rig_args);
      const RigidityOptions ro{g.tol.flat, g.tol.nonflat, g.tol.homog};
      const RigidityTable table = cmd_rigidity(req, parse_sweeps(sweep_args), sample_spec(g), ro);
      emit(g, to_json(table), to_text(table));
      for (const auto& row : table.rows) {
        if (row.summary.failures > 0) return kExitNumeric;
      }
      return table.all_pass() ? 0 : kExitFail;
    }
    if (*geodesic) {
      MetricField metric = resolve_metric(metric_request(g, geo_args));
      if (metric.kind == MetricKind::Complex) metric = to_real(metric);
      const std::vector<double> x0 = parse_number_list(x0_text);
      const std::vector<double> u0 = parse_number_list(u0_text);
      const GeodesicTrace trace = integrate_geodesic(metric, x0, u0, horizon, steps);
      if (out_path.empty()) {
        std::cout << to_csv(trace);
      } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw UsageError("cannot write '" + out_path + "'");
        out << to_csv(trace);
      }
      std::cerr << summary_line(trace) << "\n";
      switch (trace.termination) {
        case Termination::Completed: return 0;
        case Termination::LeftDomain: return kExitFail;
        case Termination::StepFailure: return kExitNumeric;
      }
    }
    if (*parse_eval) {
      if (g.expr.empty()) throw UsageError("parse-eval needs --expr");
      const MetricRequest req = metric_request(g, {});
      const expr::Expr e = expr::parse(req.expr->source, req.expr->kind, req.expr->dim, req.expr->param_names);
      const MetricField metric = expr::metric_from_expr(e, "expr", req.expr->param_values);
      const double value = evaluate_packed(metric, parse_number_list(x_text), parse_number_list(u_text));
      nlohmann::ordered_json j;
      j["expr"] = e.source();
      j["kind"] = to_string(e.kind());
      j["dim"] = e.dim();
      j["nonsmooth"] = e.has_nonsmooth();
      j["value"] = value;
      emit(g, j, format_number(value) + "\n");
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
