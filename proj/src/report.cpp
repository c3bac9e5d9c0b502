#include "finsler/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "finsler/axioms.hpp"
#include "finsler/calculus.hpp"
#include "finsler/errors.hpp"
#include "finsler/expr.hpp"
#include "finsler/zoo.hpp"

namespace finsler {
namespace {

using cd = std::complex<double>;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw UsageError("not a number: '" + text + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

/// Running max of a statistic plus a flag telling whether it was ever fed.
struct Max {
  double value = 0.0;
  bool seen = false;
  void add(double v) {
    value = seen ? std::max(value, v) : v;
    seen = true;
  }
};

struct Min {
  double value = kInf;
  void add(double v) { value = std::min(value, v); }
};

CheckVerdict threshold_verdict(double rel, double tol) { return rel <= tol ? CheckVerdict::Pass : CheckVerdict::Fail; }

CheckVerdict flatness_verdict(double rel, const Tolerances& tol) {
  if (rel <= tol.flat) return CheckVerdict::Pass;
  if (rel >= tol.nonflat) return CheckVerdict::Fail;
  return CheckVerdict::Inconclusive;
}

ReportEntry entry(std::string name, const Max& abs, const Max& rel, double tol, CheckVerdict verdict,
                  std::string note = {}) {
  return {std::move(name), abs.value, rel.value, tol, verdict, std::move(note)};
}

ReportEntry skipped(std::string name, std::string reason) {
  return {std::move(name), 0.0, 0.0, 0.0, CheckVerdict::Skipped, std::move(reason)};
}

void homogeneity_pair(const MetricField& metric, const RealTangentSample& s, double f,
                      std::span<const cd> scalars, bool positive_only, Max& abs, Max& rel) {
  for (const auto& lambda : scalars) {
    if (positive_only && !(lambda.imag() == 0.0 && lambda.real() > 0.0)) continue;
    const double r = homogeneity_residual(metric, s, std::span<const cd>(&lambda, 1));
    abs.add(r);
    rel.add(r / (1.0 + std::abs(lambda) * f));
  }
}

}  // namespace

std::string to_string(CheckVerdict v) {
  switch (v) {
    case CheckVerdict::Pass: return "PASS";
    case CheckVerdict::Fail: return "FAIL";
    case CheckVerdict::Inconclusive: return "INCONCLUSIVE";
    case CheckVerdict::Skipped: return "SKIPPED";
  }
  return "?";
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

Params parse_assignments(const std::string& text) {
  Params p;
  if (trim(text).empty()) return p;
  for (const auto& part : split(text, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw UsageError("expected name=value, got '" + part + "'");
    const std::string name = trim(part.substr(0, eq));
    if (name.empty()) throw UsageError("empty parameter name in '" + part + "'");
    p[name] = parse_double(part.substr(eq + 1));
  }
  return p;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_double(part));
  if (out.empty()) throw UsageError("empty number list");
  return out;
}

MetricField resolve_metric(const MetricRequest& req) {
  if (req.expr) {
    const ExprRequest& e = *req.expr;
    std::vector<double> values = e.param_values;
    for (const auto& [name, value] : req.overrides) {
      const auto it = std::find(e.param_names.begin(), e.param_names.end(), name);
      if (it == e.param_names.end()) throw UsageError("expression has no parameter '" + name + "'");
      values[static_cast<std::size_t>(it - e.param_names.begin())] = value;
    }
    const expr::Expr parsed = expr::parse(e.source, e.kind, e.dim, e.param_names);
    return expr::metric_from_expr(parsed, "expr", values);
  }
  return make_zoo_metric(req.zoo_name, req.dim, req.overrides);
}

bool ResidualReport::all_pass() const {
  if (sample_errors > 0) return false;
  return std::all_of(entries.begin(), entries.end(), [](const ReportEntry& e) {
    return e.verdict == CheckVerdict::Pass || e.verdict == CheckVerdict::Skipped;
  });
}

bool RigidityTable::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const RigidityRow& r) {
    return r.verdict == CheckVerdict::Pass || r.verdict == CheckVerdict::Skipped;
  });
}

ResidualReport cmd_check(const MetricField& metric, const CheckOptions& opts) {
  const Tolerances& tol = opts.tol;
  ResidualReport rep;
  rep.metric = metric.name;
  rep.params = metric.params;
  rep.kind = metric.kind;
  rep.dim = metric.dim;
  rep.spec = opts.spec;

  const bool complex = metric.kind == MetricKind::Complex;
  const auto scalars = default_scalars(metric.kind);
  const std::vector<RealTangentSample> samples = generate_samples(metric, opts.spec);

  Max hom_pos_abs, hom_pos_rel, hom_abs, hom_rel;
  Max euler_abs, euler_rel, euler_zv_abs, euler_zv_rel;
  Min min_g, min_G;
  int chain_violations = 0;
  Max hamel_abs, hamel_rel, df_abs, df_rel;
  Max zgrad_abs, zgrad_rel;
  Max pf_chain_abs, pf_chain_rel, df_chain_abs, df_chain_rel;
  Max fd_rel;

  for (const auto& s : samples) {
    try {
      const double f = evaluate_packed(metric, s.x, s.u);
      if (!complex) homogeneity_pair(metric, s, f, scalars, true, hom_pos_abs, hom_pos_rel);
      homogeneity_pair(metric, s, f, scalars, false, hom_abs, hom_rel);

      const RealJet2 jet = packed_jet(metric, s.x, s.u);
      const Eigen::Map<const Eigen::VectorXd> u(s.u.data(), static_cast<Eigen::Index>(s.u.size()));
      const FundamentalTensors t = fundamental_tensors(metric, s);
      min_g.add(t.g_def.min_eigenvalue);
      if (opts.fd_check) fd_rel.add(jet_discrepancy(jet, fd_packed_jet(metric, s.x, s.u)));

      if (!complex) {
        const double e = std::abs(jet.f.du.dot(u) - f);
        euler_abs.add(e);
        euler_rel.add(e / (1.0 + f));
        const ResidualVector h = hamel_residual(jet, s.u);
        const ResidualVector d = dualflat_residual(jet, s.u);
        hamel_abs.add(h.norm);
        hamel_rel.add(h.relative());
        df_abs.add(d.norm);
        df_rel.add(d.relative());
        continue;
      }

      min_G.add(t.G_def->min_eigenvalue);
      if (t.g_def.min_eigenvalue > tol.posdef && !(t.G_def->min_eigenvalue > tol.posdef)) ++chain_violations;

      const ComplexTangentSample cs = unpack(s);
      const Eigen::Map<const Eigen::VectorXcd> v(cs.v.data(), static_cast<Eigen::Index>(cs.v.size()));
      const ComplexJet2 cj = wirtinger(jet);
      const double ev = std::abs((cj.f.dv.transpose() * v)(0) - 0.5 * f);
      const double ezv = (cj.f.zv.transpose() * v - 0.5 * cj.f.dz).cwiseAbs().maxCoeff();
      euler_abs.add(ev);
      euler_rel.add(ev / (1.0 + f));
      euler_zv_abs.add(ezv);
      euler_zv_rel.add(ezv / (1.0 + f + std::max(cj.f.zv.cwiseAbs().maxCoeff(), cj.f.dz.cwiseAbs().maxCoeff())));

      const ResidualVector p = complex_pf_residual(cj, cs.v);
      const ResidualVector q = complex_df_residual(cj, cs.v);
      hamel_abs.add(p.norm);
      hamel_rel.add(p.relative());
      df_abs.add(q.norm);
      df_rel.add(q.relative());
      const double zg = std::max(cj.f.dz.cwiseAbs().maxCoeff(), cj.f2.dz.cwiseAbs().maxCoeff());
      zgrad_abs.add(zg);
      zgrad_rel.add(std::max(cj.f.dz.cwiseAbs().maxCoeff() / (1.0 + f),
                             cj.f2.dz.cwiseAbs().maxCoeff() / (1.0 + f * f)));

      // Conclusions of the rigidity argument, tested only where its hypothesis holds.
      const ProofChainReport chain = proof_chain(cj, cs.v);
      if (p.relative() <= tol.flat) {
        const double c = std::max({chain.c, chain.r, chain.v, chain.zgrad});
        pf_chain_abs.add(c);
        pf_chain_rel.add(c / p.scale);
      }
      if (q.relative() <= tol.flat) {
        const double c = std::max({chain.c1, chain.f1, chain.v1, chain.zgrad2});
        df_chain_abs.add(c);
        df_chain_rel.add(c / q.scale);
      }
    } catch (const Error& e) {
      if (rep.sample_errors++ == 0) rep.first_error = e.what();
    }
  }

  auto& out = rep.entries;
  if (complex) {
    out.push_back(entry("homogeneity-complex", hom_abs, hom_rel, tol.homog, threshold_verdict(hom_rel.value, tol.homog),
                        "|F(z,λv) - |λ|F(z,v)|, λ in {2,-1,0.5,i,e^{iπ/4},2e^{2i}}"));
    out.push_back(entry("euler-complex-v", euler_abs, euler_rel, tol.homog, threshold_verdict(euler_rel.value, tol.homog),
                        "|Σ F_{v^i} v^i - F/2|"));
    out.push_back(entry("euler-complex-zv", euler_zv_abs, euler_zv_rel, tol.homog,
                        threshold_verdict(euler_zv_rel.value, tol.homog), "max_j |Σ_i F_{z^j v^i} v^i - F_{z^j}/2|"));
  } else {
    out.push_back(entry("homogeneity-positive", hom_pos_abs, hom_pos_rel, tol.homog,
                        threshold_verdict(hom_pos_rel.value, tol.homog), "|F(x,λu) - λF(x,u)|, λ in {2,0.5}"));
    out.push_back(entry("homogeneity-absolute", hom_abs, hom_rel, tol.homog, threshold_verdict(hom_rel.value, tol.homog),
                        "|F(x,λu) - |λ|F(x,u)|, λ in {2,-1,0.5}"));
    out.push_back(entry("euler-real", euler_abs, euler_rel, tol.homog, threshold_verdict(euler_rel.value, tol.homog),
                        "|Σ u^a F_{u^a} - F|"));
  }
  {
    Max g;
    g.add(min_g.value);
    out.push_back(entry("strong-convexity", g, g, tol.posdef,
                        min_g.value > tol.posdef ? CheckVerdict::Pass : CheckVerdict::Fail,
                        "statistic is the minimum eigenvalue of g over samples"));
  }
  if (complex) {
    Max G;
    G.add(min_G.value);
    out.push_back(entry("strong-pseudoconvexity", G, G, tol.posdef,
                        min_G.value > tol.posdef ? CheckVerdict::Pass : CheckVerdict::Fail,
                        "statistic is the minimum eigenvalue of G over samples"));
    Max v;
    v.add(chain_violations);
    out.push_back(entry("convexity-chain", v, v, 0.0,
                        chain_violations == 0 ? CheckVerdict::Pass : CheckVerdict::Fail,
                        "samples with g > 0 but G not > 0"));
    out.push_back(entry("complex-pf", hamel_abs, hamel_rel, tol.flat, flatness_verdict(hamel_rel.value, tol),
                        "P_i = Σ F_{z^j v^i}v^j + Σ F_{z̄^j v^i}v̄^j - F_{z^i}"));
    out.push_back(entry("complex-df", df_abs, df_rel, tol.flat, flatness_verdict(df_rel.value, tol),
                        "Q_i = Σ (F²)_{z^j v^i}v^j + Σ (F²)_{z̄^j v^i}v̄^j - 2(F²)_{z^i}"));
    out.push_back(entry("z-gradient", zgrad_abs, zgrad_rel, tol.flat, flatness_verdict(zgrad_rel.value, tol),
                        "max_i max(|F_{z^i}|, |(F²)_{z^i}|)"));
    if (pf_chain_abs.seen) {
      out.push_back(entry("proof-chain-pf", pf_chain_abs, pf_chain_rel, tol.flat,
                          threshold_verdict(pf_chain_rel.value, tol.flat), "max(c, r, v, zgrad) where complex-pf holds"));
    } else {
      out.push_back(skipped("proof-chain-pf", "complex-pf residual never below tolerance"));
    }
    if (df_chain_abs.seen) {
      out.push_back(entry("proof-chain-df", df_chain_abs, df_chain_rel, tol.flat,
                          threshold_verdict(df_chain_rel.value, tol.flat), "max(c1, f1, v1, zgrad2) where complex-df holds"));
    } else {
      out.push_back(skipped("proof-chain-df", "complex-df residual never below tolerance"));
    }
  } else {
    out.push_back(entry("hamel", hamel_abs, hamel_rel, tol.flat, flatness_verdict(hamel_rel.value, tol),
                        "R_a = Σ F_{x^b u^a}u^b - F_{x^a}"));
    out.push_back(entry("dualflat", df_abs, df_rel, tol.flat, flatness_verdict(df_rel.value, tol),
                        "D_a = Σ (F²)_{x^b u^a}u^b - 2(F²)_{x^a}"));
  }
  if (opts.fd_check) {
    out.push_back(entry("fd-oracle", fd_rel, fd_rel, tol.fd, threshold_verdict(fd_rel.value, tol.fd),
                        "hyper-dual vs central differences, blockwise relative"));
  } else {
    out.push_back(skipped("fd-oracle", "enable with --fd-check"));
  }

  if (complex) {
    RigidityOptions ro{tol.flat, tol.nonflat, tol.homog};
    rep.classification = to_string(rigidity_scan(metric, opts.spec, ro).classification);
  } else {
    const auto h = flatness_verdict(hamel_rel.value, tol);
    const auto d = flatness_verdict(df_rel.value, tol);
    if (h == CheckVerdict::Inconclusive || d == CheckVerdict::Inconclusive) {
      rep.classification = "INCONCLUSIVE";
    } else if (h == CheckVerdict::Pass && d == CheckVerdict::Pass) {
      rep.classification = "PROJECTIVELY-AND-DUALLY-FLAT";
    } else if (h == CheckVerdict::Pass) {
      rep.classification = "PROJECTIVELY-FLAT";
    } else if (d == CheckVerdict::Pass) {
      rep.classification = "DUALLY-FLAT";
    } else {
      rep.classification = "NON-FLAT";
    }
  }
  return rep;
}

RigidityTable cmd_rigidity(const MetricRequest& req, const std::vector<Sweep>& sweeps, const SampleSpec& spec,
                           const RigidityOptions& opts) {
  RigidityTable table;
  table.spec = spec;
  for (const auto& s : sweeps) {
    if (s.values.empty()) throw UsageError("sweep of '" + s.param + "' has no values");
    table.swept.push_back(s.param);
  }

  std::vector<std::size_t> idx(sweeps.size(), 0);
  while (true) {
    MetricRequest r = req;
    for (std::size_t k = 0; k < sweeps.size(); ++k) r.overrides[sweeps[k].param] = sweeps[k].values[idx[k]];
    const MetricField metric = resolve_metric(r);
    if (metric.kind != MetricKind::Complex) throw UsageError(metric.name + ": rigidity needs a complex metric");
    table.metric = metric.name;
    table.kind = metric.kind;
    table.dim = metric.dim;

    RigidityRow row;
    row.params = metric.params;
    row.summary = rigidity_scan(metric, spec, opts);
    switch (row.summary.classification) {
      case Classification::Excluded: row.verdict = CheckVerdict::Skipped; break;
      case Classification::Inconclusive: row.verdict = CheckVerdict::Inconclusive; break;
      default: row.verdict = row.summary.theorem_consistent ? CheckVerdict::Pass : CheckVerdict::Fail;
    }
    table.rows.push_back(std::move(row));

    std::size_t k = sweeps.size();
    while (k > 0) {
      --k;
      if (++idx[k] < sweeps[k].values.size()) break;
      idx[k] = 0;
      if (k == 0) return table;
    }
    if (sweeps.empty()) return table;
  }
}

std::string cmd_list() {
  std::ostringstream os;
  for (const auto& e : zoo_list()) {
    const auto& f = e.flags;
    std::vector<std::string> flags;
    auto add = [&](bool on, const char* name) {
      if (on) flags.emplace_back(name);
    };
    add(f.homogeneous_real, "homogeneous-real");
    add(f.reversible, "reversible");
    add(f.homogeneous_complex, "homogeneous-complex");
    add(f.strongly_convex, "strongly-convex");
    add(f.strongly_pseudoconvex, "strongly-pseudoconvex");
    add(f.projectively_flat_real, "projectively-flat-real");
    add(f.dually_flat_real, "dually-flat-real");
    add(f.complex_pf, "complex-pf");
    add(f.complex_df, "complex-df");
    add(f.z_independent, "z-independent");
    os << e.name << " [" << to_string(e.kind) << "]";
    if (!e.defaults.empty()) {
      os << " params:";
      for (const auto& [k, v] : e.defaults) os << " " << k << "=" << format_number(v);
    }
    os << "\n  " << e.doc << "\n  flags:";
    for (const auto& fl : flags) os << " " << fl;
    os << "\n";
  }
  return os.str();
}

namespace {

nlohmann::ordered_json params_json(const Params& p) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : p) j[k] = v;
  return j;
}

nlohmann::ordered_json spec_json(const SampleSpec& s) {
  nlohmann::ordered_json j;
  j["seed"] = s.seed;
  j["count"] = s.count;
  j["region"] = s.region == BaseRegion::Ball ? "ball" : "box";
  j["radius"] = s.radius;
  j["tangent"] = "unit-sphere";
  j["prng"] = "mt19937_64";
  return j;
}

}  // namespace

nlohmann::ordered_json to_json(const ResidualReport& r) {
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["metric"] = r.metric;
  j["params"] = params_json(r.params);
  j["kind"] = to_string(r.kind);
  j["dim"] = r.dim;
  j["seed"] = r.spec.seed;
  j["samples"] = r.spec.count;
  j["sample_spec"] = spec_json(r.spec);
  auto& arr = j["residuals"] = nlohmann::ordered_json::array();
  for (const auto& e : r.entries) {
    nlohmann::ordered_json je;
    je["name"] = e.name;
    je["max_abs"] = e.max_abs;
    je["max_rel"] = e.max_rel;
    je["tolerance"] = e.tolerance;
    je["verdict"] = to_string(e.verdict);
    if (!e.note.empty()) je["note"] = e.note;
    arr.push_back(std::move(je));
  }
  j["classification"] = r.classification;
  j["sample_errors"] = r.sample_errors;
  if (r.sample_errors > 0) j["first_error"] = r.first_error;
  if (r.wall_time_s) j["wall_time_s"] = *r.wall_time_s;
  return j;
}

nlohmann::ordered_json to_json(const RigidityTable& t) {
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["metric"] = t.metric;
  j["kind"] = to_string(t.kind);
  j["dim"] = t.dim;
  j["seed"] = t.spec.seed;
  j["samples"] = t.spec.count;
  j["sample_spec"] = spec_json(t.spec);
  j["swept"] = t.swept;
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    const RigiditySummary& s = row.summary;
    nlohmann::ordered_json jr;
    jr["params"] = params_json(row.params);
    auto& res = jr["residuals"] = nlohmann::ordered_json::array();
    auto add = [&](const char* name, double abs, double rel, const std::string& verdict) {
      res.push_back({{"name", name}, {"max_abs", abs}, {"max_rel", rel}, {"verdict", verdict}});
    };
    add("complex-pf", s.max_pf_abs, s.max_pf_rel, to_string(s.pf));
    add("complex-df", s.max_df_abs, s.max_df_rel, to_string(s.df));
    add("z-gradient-F", s.max_zgrad_f, s.max_zgrad_f_rel, to_string(s.zgrad));
    add("z-gradient-F2", s.max_zgrad_f2, s.max_zgrad_f2_rel, to_string(s.zgrad));
    add("homogeneity-complex", s.max_homogeneity_rel, s.max_homogeneity_rel,
        s.classification == Classification::Excluded ? "FAIL" : "PASS");
    jr["classification"] = to_string(s.classification);
    jr["theorem_consistent"] = s.theorem_consistent;
    jr["verdict"] = to_string(row.verdict);
    jr["sample_errors"] = s.failures;
    if (s.failures > 0) jr["first_error"] = s.first_failure;
    rows.push_back(std::move(jr));
  }
  return j;
}

std::string to_text(const ResidualReport& r) {
  std::ostringstream os;
  os << r.metric << " (" << to_string(r.kind) << ", dim " << r.dim << ")";
  for (const auto& [k, v] : r.params) os << " " << k << "=" << format_number(v);
  os << "  seed " << r.spec.seed << ", " << r.spec.count << " samples\n";
  for (const auto& e : r.entries) {
    char line[256];
    std::snprintf(line, sizeof line, "  %-24s %-12s max_abs %-12.4e max_rel %-12.4e tol %.1e\n", e.name.c_str(),
                  to_string(e.verdict).c_str(), e.max_abs, e.max_rel, e.tolerance);
    os << line;
  }
  os << "  classification: " << r.classification << "\n";
  if (r.sample_errors > 0) os << "  sample errors: " << r.sample_errors << " (" << r.first_error << ")\n";
  return os.str();
}

std::string to_text(const RigidityTable& t) {
  std::ostringstream os;
  os << t.metric << " (dim " << t.dim << ") seed " << t.spec.seed << ", " << t.spec.count << " samples\n";
  for (const auto& row : t.rows) {
    const RigiditySummary& s = row.summary;
    os << " ";
    for (const auto& name : t.swept) os << " " << name << "=" << format_number(row.params.at(name));
    char line[256];
    std::snprintf(line, sizeof line, "  pf %.3e  df %.3e  zgradF %.3e  zgradF2 %.3e  %s  %s\n", s.max_pf_abs,
                  s.max_df_abs, s.max_zgrad_f, s.max_zgrad_f2, to_string(s.classification).c_str(),
                  to_string(row.verdict).c_str());
    os << line;
  }
  return os.str();
}

std::string to_csv(const GeodesicTrace& trace) {
  std::ostringstream os;
  const std::size_t m = trace.samples.empty() ? 0 : trace.samples.front().x.size();
  os << "t";
  for (std::size_t k = 1; k <= m; ++k) os << ",x_" << k;
  for (std::size_t k = 1; k <= m; ++k) os << ",u_" << k;
  os << "\n";
  for (const auto& p : trace.samples) {
    os << format_number(p.t);
    for (double v : p.x) os << "," << format_number(v);
    for (double v : p.u) os << "," << format_number(v);
    os << "\n";
  }
  return os.str();
}

std::string summary_line(const GeodesicTrace& trace) {
  std::string s = "deviation=" + format_number(trace.straightness_deviation) +
                  " path_length=" + format_number(trace.path_length) + " steps=" +
                  std::to_string(trace.samples.empty() ? 0 : trace.samples.size() - 1) +
                  " termination=" + to_string(trace.termination);
  if (!trace.message.empty()) s += " (" + trace.message + ")";
  return s;
}

}  // namespace finsler
