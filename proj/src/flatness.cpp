#include "finsler/flatness.hpp"

#include <algorithm>
#include <cmath>

#include "finsler/axioms.hpp"
#include "finsler/errors.hpp"

namespace finsler {
namespace {

using cd = std::complex<double>;

double max_modulus(const std::vector<cd>& v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

ResidualVector finish(ResidualKind kind, std::vector<cd> comps, double scale) {
  ResidualVector r;
  r.kind = kind;
  r.norm = max_modulus(comps);
  r.components = std::move(comps);
  r.scale = scale;
  return r;
}

// Σ_b xu(a, b) u^b − factor·dx(a)
ResidualVector real_residual(ResidualKind kind, const RealJetBlocks& b, std::span<const double> u,
                             double factor) {
  const auto m = b.dx.size();
  if (static_cast<Eigen::Index>(u.size()) != m) throw UsageError("tangent length does not match the jet");
  const Eigen::Map<const Eigen::VectorXd> uv(u.data(), m);
  const Eigen::VectorXd r = b.xu * uv - factor * b.dx;
  std::vector<cd> comps(r.begin(), r.end());
  const double scale = 1.0 + std::abs(b.value) + std::max(b.xu.cwiseAbs().maxCoeff(), b.dx.cwiseAbs().maxCoeff());
  return finish(kind, std::move(comps), scale);
}

Eigen::VectorXcd as_vector(std::span<const cd> v) {
  return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

ResidualVector complex_residual(ResidualKind kind, const ComplexJetBlocks& b, std::span<const cd> v,
                                double factor) {
  if (static_cast<Eigen::Index>(v.size()) != b.dz.size()) {
    throw UsageError("tangent length does not match the jet");
  }
  const Eigen::VectorXcd vv = as_vector(v);
  const Eigen::VectorXcd r = b.zv * vv + b.zbarv * vv.conjugate() - factor * b.dz;
  std::vector<cd> comps(r.begin(), r.end());
  const double blocks = std::max({b.zv.cwiseAbs().maxCoeff(), b.zbarv.cwiseAbs().maxCoeff(),
                                  b.dz.cwiseAbs().maxCoeff()});
  return finish(kind, std::move(comps), 1.0 + std::abs(b.value) + blocks);
}

RealJet2 jet_for(const MetricField& metric, const RealTangentSample& s) {
  if (metric.kind != MetricKind::Real) throw UsageError(metric.name + ": real residual needs a real metric");
  return real_jet(metric, s);
}

ComplexJet2 jet_for(const MetricField& metric, const ComplexTangentSample& s) {
  if (metric.kind != MetricKind::Complex) {
    throw UsageError(metric.name + ": complex residual needs a complex metric");
  }
  return complex_jet(metric, s);
}

}  // namespace

std::string to_string(ResidualKind kind) {
  switch (kind) {
    case ResidualKind::Hamel: return "hamel";
    case ResidualKind::DualFlat: return "dualflat";
    case ResidualKind::ComplexPF: return "complex-pf";
    case ResidualKind::ComplexDF: return "complex-df";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Flat: return "FLAT";
    case Verdict::NonFlat: return "NON-FLAT";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Minkowski: return "MINKOWSKI";
    case Classification::NonFlat: return "NON-FLAT";
    case Classification::Inconclusive: return "INCONCLUSIVE";
    case Classification::Excluded: return "EXCLUDED";
  }
  return "?";
}

ResidualVector hamel_residual(const RealJet2& jet, std::span<const double> u) {
  return real_residual(ResidualKind::Hamel, jet.f, u, 1.0);
}
ResidualVector dualflat_residual(const RealJet2& jet, std::span<const double> u) {
  return real_residual(ResidualKind::DualFlat, jet.f2, u, 2.0);
}
ResidualVector complex_pf_residual(const ComplexJet2& jet, std::span<const cd> v) {
  return complex_residual(ResidualKind::ComplexPF, jet.f, v, 1.0);
}
ResidualVector complex_df_residual(const ComplexJet2& jet, std::span<const cd> v) {
  return complex_residual(ResidualKind::ComplexDF, jet.f2, v, 2.0);
}

ResidualVector hamel_residual(const MetricField& metric, const RealTangentSample& s) {
  return hamel_residual(jet_for(metric, s), s.u);
}
ResidualVector dualflat_residual(const MetricField& metric, const RealTangentSample& s) {
  return dualflat_residual(jet_for(metric, s), s.u);
}
ResidualVector complex_pf_residual(const MetricField& metric, const ComplexTangentSample& s) {
  return complex_pf_residual(jet_for(metric, s), s.v);
}
ResidualVector complex_df_residual(const MetricField& metric, const ComplexTangentSample& s) {
  return complex_df_residual(jet_for(metric, s), s.v);
}

std::vector<std::pair<std::string, double>> ProofChainReport::entries() const {
  return {{"e2", e2}, {"e", e},   {"d", d},   {"c", c},   {"r", r},   {"ff", ff}, {"v", v},   {"zgrad", zgrad},
          {"e1", e1}, {"d1", d1}, {"c1", c1}, {"r1", r1}, {"r2", r2}, {"f1", f1}, {"v1", v1}, {"zgrad2", zgrad2}};
}

ProofChainReport proof_chain(const ComplexJet2& jet, std::span<const cd> v) {
  if (static_cast<Eigen::Index>(v.size()) != jet.f.dz.size()) {
    throw UsageError("tangent length does not match the jet");
  }
  const Eigen::VectorXcd vv = as_vector(v);
  const Eigen::VectorXcd vb = vv.conjugate();
  auto maxabs = [](const Eigen::VectorXcd& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; };
  ProofChainReport p;

  const ComplexJetBlocks& f = jet.f;
  // Eigen's a.dot(b) conjugates a; plain contractions go through transpose products.
  const cd sz = (f.dz.transpose() * vv)(0);       // Σ F_{z^j} v^j
  const cd szb = (f.dzbar.transpose() * vb)(0);   // Σ F_{z̄^j} v̄^j
  const Eigen::VectorXcd cz = f.zv * vv;          // Σ_j F_{z^j v^i} v^j
  const Eigen::VectorXcd czb = f.zbarv * vb;      // Σ_j F_{z̄^j v^i} v̄^j
  const Eigen::VectorXcd cff = f.zvbar * vv;      // Σ_j F_{z^j v̄^i} v^j
  p.e2 = std::abs(sz - 0.5 * sz - 0.5 * szb);
  p.e = std::abs(sz - szb);
  p.d = maxabs(f.dz + cz - czb);
  p.c = maxabs(cz);
  p.r = std::abs(sz);
  p.ff = maxabs(cff);
  p.v = maxabs(czb);
  p.zgrad = maxabs(f.dz);

  const ComplexJetBlocks& g = jet.f2;
  const cd tz = (g.dz.transpose() * vv)(0);
  const cd tzb = (g.dzbar.transpose() * vb)(0);
  const Eigen::VectorXcd gz = g.zv * vv;
  const Eigen::VectorXcd gzb = g.zbarv * vb;
  p.e1 = std::abs(tz - tzb);
  p.d1 = maxabs(g.dz + gz - gzb);
  p.c1 = maxabs(gzb - 3.0 * gz);
  p.r1 = std::abs(tzb - 3.0 * tz);
  p.r2 = std::abs(tz - 3.0 * tzb);
  p.f1 = std::max(std::abs(tz), std::abs(tzb));
  p.v1 = maxabs(gzb);
  p.zgrad2 = maxabs(g.dz);
  return p;
}

ProofChainReport proof_chain(const MetricField& metric, const ComplexTangentSample& s) {
  return proof_chain(jet_for(metric, s), s.v);
}

Verdict classify_norm(double relative, const RigidityOptions& opts) {
  if (relative <= opts.tol_flat) return Verdict::Flat;
  if (relative >= opts.tol_nonflat) return Verdict::NonFlat;
  return Verdict::Inconclusive;
}

RigiditySummary rigidity_scan(const MetricField& metric, const SampleSpec& spec, const RigidityOptions& opts) {
  if (metric.kind != MetricKind::Complex) throw UsageError(metric.name + ": rigidity scan needs a complex metric");
  const auto scalars = default_scalars(MetricKind::Complex);
  RigiditySummary s;
  for (const auto& packed : generate_samples(metric, spec)) {
    ++s.samples;
    try {
      const ComplexTangentSample cs = unpack(packed);
      const double f = evaluate(metric, cs);
      const double h = homogeneity_residual(metric, cs, scalars);
      s.max_homogeneity_rel = std::max(s.max_homogeneity_rel, h / (1.0 + 2.0 * f));

      const ComplexJet2 jet = complex_jet(metric, cs);
      const ResidualVector pf = complex_pf_residual(jet, cs.v);
      const ResidualVector df = complex_df_residual(jet, cs.v);
      s.max_pf_abs = std::max(s.max_pf_abs, pf.norm);
      s.max_pf_rel = std::max(s.max_pf_rel, pf.relative());
      s.max_df_abs = std::max(s.max_df_abs, df.norm);
      s.max_df_rel = std::max(s.max_df_rel, df.relative());
      const double zf = jet.f.dz.cwiseAbs().maxCoeff();
      const double zf2 = jet.f2.dz.cwiseAbs().maxCoeff();
      s.max_zgrad_f = std::max(s.max_zgrad_f, zf);
      s.max_zgrad_f2 = std::max(s.max_zgrad_f2, zf2);
      s.max_zgrad_f_rel = std::max(s.max_zgrad_f_rel, zf / (1.0 + jet.f.value));
      s.max_zgrad_f2_rel = std::max(s.max_zgrad_f2_rel, zf2 / (1.0 + jet.f2.value));
    } catch (const Error& e) {
      if (s.failures++ == 0) s.first_failure = e.what();
    }
  }

  s.pf = classify_norm(s.max_pf_rel, opts);
  s.df = classify_norm(s.max_df_rel, opts);
  s.zgrad = classify_norm(std::max(s.max_zgrad_f_rel, s.max_zgrad_f2_rel), opts);

  const bool disagree = (s.pf == Verdict::Flat && s.df == Verdict::NonFlat) ||
                        (s.pf == Verdict::NonFlat && s.df == Verdict::Flat);
  const bool flat_but_moving = (s.pf == Verdict::Flat || s.df == Verdict::Flat) && s.zgrad == Verdict::NonFlat;

  if (s.failures > 0) {
    s.classification = Classification::Inconclusive;
  } else if (s.max_homogeneity_rel > opts.tol_homog) {
    s.classification = Classification::Excluded;
  } else {
    s.theorem_consistent = !disagree && !flat_but_moving;
    if (s.pf == Verdict::Flat && s.df == Verdict::Flat && s.zgrad == Verdict::Flat) {
      s.classification = Classification::Minkowski;
    } else if (s.pf == Verdict::Inconclusive || s.df == Verdict::Inconclusive || s.zgrad == Verdict::Inconclusive) {
      s.classification = Classification::Inconclusive;
    } else {
      s.classification = Classification::NonFlat;
    }
  }
  return s;
}

}  // namespace finsler
