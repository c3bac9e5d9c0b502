// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <array>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "finsler/axioms.hpp"
#include "finsler/calculus.hpp"
#include "finsler/errors.hpp"
#include "finsler/expr.hpp"
#include "finsler/flatness.hpp"
#include "finsler/geodesics.hpp"
#include "finsler/zoo.hpp"

using namespace finsler;
using cd = std::complex<double>;

namespace {

// Tolerances, pinned.
constexpr double kFunkFlatRel = 1e-7;
constexpr double kHomogAnchor = 0.845299;
constexpr double kHomogAnchorTol = 1e-5;
constexpr double kMinkowskiMax = 1e-9;
constexpr double kAnchorTol = 1e-6;
constexpr double kEulerRel = 1e-9;
constexpr double kOracleRel = 1e-5;
constexpr double kStraight = 1e-6;
constexpr double kControlBent = 1e-3;
constexpr double kRk4Ratio = 8.0;
constexpr double kRoundTrip = 1e-12;

SampleSpec spec_of(std::uint64_t seed, int count) {
  SampleSpec s;
  s.seed = seed;
  s.count = count;
  return s;
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Criterion = std::function<void(Outcome&)>;

const ComplexTangentSample kAnchor{{cd(0), cd(0)}, {cd(0), cd(1)}};

void funk_flatness(Outcome& o) {
  const auto funk = make_zoo_metric("funk-real", 2);
  double hamel = 0, dual = 0;
  for (const auto& s : generate_samples(funk, spec_of(1, 200))) {
    hamel = std::max(hamel, hamel_residual(funk, s).relative());
    dual = std::max(dual, dualflat_residual(funk, s).relative());
  }
  o.detail << "max hamel rel=" << hamel << ", max dualflat rel=" << dual;
  o.require(hamel <= kFunkFlatRel && dual <= kFunkFlatRel, "relative norm <= 1e-7");
}

void funk_homogeneity_failure(Outcome& o) {
  const auto fc = make_zoo_metric("funk-complex-form", 2);
  const std::vector<cd> lam{cd(0, 1)};
  const double r = homogeneity_residual(fc, ComplexTangentSample{{cd(0.5), cd(0)}, {cd(1), cd(0)}}, lam);
  o.detail.precision(12);
  o.detail << "residual at lambda=i: " << r;
  o.require(std::abs(r - kHomogAnchor) <= kHomogAnchorTol, "0.845299 +- 1e-5");
}

void forward_direction(Outcome& o) {
  const std::vector<std::pair<std::string, Params>> cases{{"complex-euclidean", {}},
                                                          {"complex-hermitian-const", {}},
                                                          {"complex-minkowski-phi", {{"eps", 0.0}}},
                                                          {"complex-minkowski-phi", {{"eps", 0.1}}}};
  double worst = 0;
  for (const auto& [name, params] : cases) {
    const auto r = rigidity_scan(make_zoo_metric(name, 2, params), spec_of(1, 200));
    worst = std::max({worst, r.max_pf_abs, r.max_df_abs, r.max_zgrad_f, r.max_zgrad_f2});
    o.require(r.classification == Classification::Minkowski && r.failures == 0, name + " MINKOWSKI");
  }
  o.detail << cases.size() << " metrics MINKOWSKI, worst residual max=" << worst;
  o.require(worst <= kMinkowskiMax, "maxima <= 1e-9");
}

void converse_evidence(Outcome& o) {
  const std::vector<std::pair<std::string, std::string>> families{{"perturbed-family", "t"},
                                                                 {"hermitian-z-dependent", "c"}};
  double worst_anchor = 0;
  int rows = 0;
  for (const auto& [name, param] : families) {
    for (double t : {0.05, 0.1, 0.2, 0.3}) {
      const auto m = make_zoo_metric(name, 2, {{param, t}});
      const auto r = rigidity_scan(m, spec_of(1, 200));
      o.require(r.classification == Classification::NonFlat, name + " NON-FLAT");
      ++rows;
      // Autodiff and finite-difference jets must both reproduce the hand values.
      for (const auto& jet : {complex_jet(m, kAnchor), fd_jet(m, kAnchor)}) {
        const auto P = complex_pf_residual(jet, kAnchor.v);
        const auto Q = complex_df_residual(jet, kAnchor.v);
        worst_anchor = std::max({worst_anchor, std::abs(P.components[0] - cd(-t / 4)),
                                 std::abs(Q.components[0] - cd(-t))});
      }
    }
  }
  o.detail << rows << " parameter rows NON-FLAT, worst anchor error=" << worst_anchor;
  o.require(worst_anchor <= kAnchorTol, "P1=-t/4, Q1=-t within 1e-6");
}

void corollary_consistency(Outcome& o) {
  int scans = 0, excluded = 0;
  auto scan = [&](const MetricField& m) {
    const auto r = rigidity_scan(m, spec_of(3, 200));
    ++scans;
    if (r.classification == Classification::Excluded) {
      ++excluded;
      return;
    }
    const bool disagree = (r.pf == Verdict::Flat && r.df == Verdict::NonFlat) ||
                          (r.pf == Verdict::NonFlat && r.df == Verdict::Flat);
    o.require(!disagree && r.theorem_consistent, m.name + " verdicts agree");
  };
  for (const auto& e : zoo_list()) {
    if (e.kind == MetricKind::Complex) {
      for (int n : {1, 2}) scan(e.build(n, e.defaults));
    }
  }
  for (double t : {0.05, 0.1, 0.2}) scan(make_zoo_metric("perturbed-family", 2, {{"t", t}}));
  for (double c : {0.1, 0.3, 0.5}) scan(make_zoo_metric("hermitian-z-dependent", 2, {{"c", c}}));
  for (double eps : {-0.2, 0.0, 0.1, 0.2}) scan(make_zoo_metric("complex-minkowski-phi", 2, {{"eps", eps}}));
  o.detail << scans << " scans, " << excluded << " excluded (not complex-homogeneous), no pf/df disagreement";
}

void hermitian_specialization(Outcome& o) {
  const auto hc = rigidity_scan(make_zoo_metric("complex-hermitian-const", 2), spec_of(1, 200));
  const auto hz = make_zoo_metric("hermitian-z-dependent", 2, {{"c", 0.3}});
  const auto scan = rigidity_scan(hz, spec_of(1, 200));
  o.require(hc.classification == Classification::Minkowski, "hermitian-const MINKOWSKI");
  o.require(scan.classification == Classification::NonFlat, "hermitian-z-dependent NON-FLAT");
  double worst = 0;
  for (const cd scale : {cd(1), cd(2), cd(0.5, 0.5)}) {
    ComplexTangentSample s{{cd(0), cd(0)}, {cd(0), scale}};
    const double expected = 0.3 * std::norm(scale) / 2;
    worst = std::max(worst, std::abs(complex_jet(hz, s).f2.dz.cwiseAbs().maxCoeff() - expected));
  }
  o.detail << "const: " << to_string(hc.classification) << ", z-dependent: " << to_string(scan.classification)
           << ", |(F^2)_z - 0.3|v|^2/2| max=" << worst;
  o.require(worst <= kAnchorTol, "z-gradient of F^2 within 1e-6");
}

void euler_identities(Outcome& o) {
  double worst = 0;
  int metrics = 0;
  for (const auto& e : zoo_list()) {
    const bool homogeneous = e.kind == MetricKind::Real ? e.flags.homogeneous_real : e.flags.homogeneous_complex;
    if (!homogeneous) continue;
    ++metrics;
    const auto m = e.build(2, e.defaults);
    for (const auto& s : generate_samples(m, spec_of(7, 100))) {
      const auto rj = packed_jet(m, s.x, s.u);
      const double F = rj.f.value;
      double euler_real = 0;
      for (std::size_t a = 0; a < s.u.size(); ++a) euler_real += rj.f.du(a) * s.u[a];
      worst = std::max(worst, std::abs(euler_real - F) / (1 + F));
      if (e.kind != MetricKind::Complex) continue;
      const auto c = unpack(s);
      const auto cj = wirtinger(rj);
      cd euler_v = 0;
      for (int i = 0; i < 2; ++i) euler_v += cj.f.dv(i) * c.v[i];
      worst = std::max(worst, std::abs(euler_v - F / 2) / (1 + F));
      const double zscale = 1 + cj.f.dz.cwiseAbs().maxCoeff() + cj.f.zv.cwiseAbs().maxCoeff();
      for (int j = 0; j < 2; ++j) {
        cd sum = 0;
        for (int i = 0; i < 2; ++i) sum += cj.f.zv(i, j) * c.v[i];
        worst = std::max(worst, std::abs(sum - 0.5 * cj.f.dz(j)) / zscale);
      }
    }
  }
  o.detail << metrics << " homogeneous metrics x 100 samples, worst relative=" << worst;
  o.require(worst <= kEulerRel, "<= 1e-9");
}

void derivative_oracle(Outcome& o) {
  double worst = 0;
  std::string worst_name;
  for (const auto& e : zoo_list()) {
    const auto m = e.build(2, e.defaults);
    for (const auto& s : generate_samples(m, spec_of(8, 200))) {
      const double d = jet_discrepancy(packed_jet(m, s.x, s.u), fd_packed_jet(m, s.x, s.u));
      if (d > worst) {
        worst = d;
        worst_name = e.name;
      }
    }
  }
  o.detail << "worst discrepancy=" << worst << " (" << worst_name << ")";
  o.require(worst <= kOracleRel, "<= 1e-5");
}

void convexity_chain(Outcome& o) {
  int violations = 0, samples = 0;
  for (const auto& e : zoo_list()) {
    if (e.kind != MetricKind::Complex) continue;
    const auto r = strong_convexity_report(e.build(2, e.defaults), spec_of(9, 200));
    violations += r.implication_violations;
    samples += r.samples;
    o.require(r.failures == 0, e.name + " evaluates on every sample");
  }
  const auto funk = make_zoo_metric("funk-real", 2);
  double min_eig = std::numeric_limits<double>::infinity();
  for (const auto& s : generate_samples(funk, spec_of(9, 200))) {
    min_eig = std::min(min_eig, fundamental_tensors(funk, s).g_def.min_eigenvalue);
  }
  o.detail << violations << " implication violations over " << samples << " samples; Funk min eig(g)=" << min_eig;
  o.require(violations == 0, "g > 0 implies G > 0");
  o.require(min_eig > 0, "Funk g positive definite");
}

void geodesic_straightness(Outcome& o) {
  const auto funk = make_zoo_metric("funk-real", 2);
  double worst = 0;
  for (const auto& s : generate_samples(funk, spec_of(20, 20))) {
    const auto tr = integrate_geodesic(funk, s.x, s.u, 0.5, 500);
    o.require(tr.termination != Termination::StepFailure, "no step failure");
    worst = std::max(worst, tr.straightness_deviation);
  }
  const auto se = make_zoo_metric("scaled-euclidean-real", 2, {{"c", 0.5}});
  const std::vector<double> x0{0, 0}, u0{0, 1};
  const double control = integrate_geodesic(se, x0, u0, 1.0, 1000).straightness_deviation;

  const std::vector<double> x1{0.1, -0.2}, u1{0.3, 1.0};
  const auto ref = integrate_geodesic(se, x1, u1, 1.0, 8192).samples.back().x;
  auto err = [&](int n) {
    const auto x = integrate_geodesic(se, x1, u1, 1.0, n).samples.back().x;
    return std::max(std::abs(x[0] - ref[0]), std::abs(x[1] - ref[1]));
  };
  const double ratio = err(32) / err(64);
  o.detail << "Funk worst deviation=" << worst << ", control deviation=" << control << ", RK4 halving ratio=" << ratio;
  o.require(worst <= kStraight, "Funk straight");
  o.require(control > kControlBent, "control bent");
  o.require(ratio >= kRk4Ratio, "RK4 order");
}

std::string run_capture(const std::string& cmd) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return "<popen failed>";
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  pclose(pipe);
  return out;
}

void parser(Outcome& o) {
  double worst = 0;
  for (const char* name : {"funk-complex-form", "complex-euclidean"}) {
    const auto& entry = zoo_find(name);
    const auto builtin = entry.build(2, entry.defaults);
    const auto parsed = expr::metric_from_expr(expr::parse(*entry.dsl(2), MetricKind::Complex, 2), "dsl", {});
    for (const auto& s : generate_samples(builtin, spec_of(11, 500))) {
      const double b = evaluate_packed(builtin, s.x, s.u);
      worst = std::max(worst, std::abs(b - evaluate_packed(parsed, s.x, s.u)) / (1 + std::abs(b)));
    }
  }
  o.require(worst <= kRoundTrip, "round trip <= 1e-12");

  const std::vector<std::pair<std::string, std::size_t>> malformed{
      {"sqrt(normsq(v", 14}, {"1 +* 2", 4}, {"abs(v9)", 5}, {"herm(z)", 1}, {"foo(v1)", 1}};
  int positioned = 0;
  for (const auto& [src, offset] : malformed) {
    try {
      expr::parse(src, MetricKind::Complex, 2);
    } catch (const ParseError& e) {
      if (e.offset() == offset) ++positioned;
    }
  }
  o.require(positioned == static_cast<int>(malformed.size()), "malformed inputs positioned");

  std::string det = "skipped";
#ifdef FINSLERLAB_CLI
  const std::string cli = FINSLERLAB_CLI;
  bool identical = true;
  for (const std::string args :
       {" check complex-minkowski-phi --samples 50 --seed 3", " rigidity perturbed-family --t 0.05,0.2 --samples 50",
        " geodesic funk-real --x0 0,0 --u0 0.6,0.8 --T 0.5 --N 50",
        " --expr 'sqrt(normsq(v))' --expr-kind complex --expr-dim 2 check --samples 30"}) {
    const std::string a = run_capture(cli + args + " 2>&1"), b = run_capture(cli + args + " 2>&1");
    identical = identical && a == b && !a.empty();
  }
  det = identical ? "byte-identical" : "DIFFERENT";
  o.require(identical, "CLI determinism");
#else
  o.require(false, "CLI path not configured");
#endif
  o.detail << "round-trip worst=" << worst << ", " << positioned << "/" << malformed.size()
           << " positioned errors, repeated CLI runs " << det;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Criterion>> criteria{
      {"Funk flatness", funk_flatness},
      {"Funk complex-homogeneity failure", funk_homogeneity_failure},
      {"theorem forward direction", forward_direction},
      {"theorem converse evidence", converse_evidence},
      {"pf/df verdict consistency", corollary_consistency},
      {"hermitian specialization", hermitian_specialization},
      {"homogeneity (Euler) identities", euler_identities},
      {"derivative oracle", derivative_oracle},
      {"convexity chain", convexity_chain},
      {"geodesic straightness", geodesic_straightness},
      {"parser round trip, errors, determinism", parser},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      criteria[k].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << (k + 1) << ": " << criteria[k].first << " — "
              << o.detail.str() << "\n";
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
