#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "finsler/calculus.hpp"
#include "finsler/metric.hpp"
#include "finsler/sampling.hpp"

namespace finsler {

enum class ResidualKind { Hamel, DualFlat, ComplexPF, ComplexDF };

std::string to_string(ResidualKind kind);

/// One flatness characterization evaluated at one sample.
struct ResidualVector {
  ResidualKind kind = ResidualKind::Hamel;
  std::vector<std::complex<double>> components;  // imaginary parts zero for real kinds
  double norm = 0.0;   // max modulus
  double scale = 1.0;  // 1 + |value| + max |jet entry used|

  double relative() const { return norm / scale; }
};

/// R_a = Σ_b F_{x^b u^a} u^b − F_{x^a}. Zero iff the Hamel equations hold at s.
ResidualVector hamel_residual(const MetricField& metric, const RealTangentSample& s);
/// D_a = Σ_b (F²)_{x^b u^a} u^b − 2(F²)_{x^a}.
ResidualVector dualflat_residual(const MetricField& metric, const RealTangentSample& s);
/// P_i = Σ_j F_{z^j v^i} v^j + Σ_j F_{z̄^j v^i} v̄^j − F_{z^i}.
ResidualVector complex_pf_residual(const MetricField& metric, const ComplexTangentSample& s);
/// Q_i = Σ_j (F²)_{z^j v^i} v^j + Σ_j (F²)_{z̄^j v^i} v̄^j − 2(F²)_{z^i}.
ResidualVector complex_df_residual(const MetricField& metric, const ComplexTangentSample& s);

// Jet-level forms, for callers that already hold a jet.
ResidualVector hamel_residual(const RealJet2& jet, std::span<const double> u);
ResidualVector dualflat_residual(const RealJet2& jet, std::span<const double> u);
ResidualVector complex_pf_residual(const ComplexJet2& jet, std::span<const std::complex<double>> v);
ResidualVector complex_df_residual(const ComplexJet2& jet, std::span<const std::complex<double>> v);

/// Each intermediate identity of the rigidity argument, evaluated on its own.
/// All entries are nonnegative moduli (max over the free index where there is one).
struct ProofChainReport {
  // Chain on F.
  double e2 = 0;     // |Σ F_{z^i}v^i − ½Σ F_{z^j}v^j − ½Σ F_{z̄^j}v̄^j|
  double e = 0;      // |Σ F_{z^i}v^i − Σ F_{z̄^i}v̄^i|
  double d = 0;      // max_i |F_{z^i} + Σ_j F_{z^j v^i}v^j − Σ_j F_{z̄^j v^i}v̄^j|
  double c = 0;      // max_i |Σ_j F_{z^j v^i}v^j|
  double r = 0;      // |Σ_j F_{z^j}v^j|
  double ff = 0;     // max_i |Σ_j F_{z^j v̄^i}v^j|
  double v = 0;      // max_i |Σ_j F_{z̄^j v^i}v̄^j|
  double zgrad = 0;  // max_i |F_{z^i}|
  // Chain on F².
  double e1 = 0;      // |Σ(F²)_{z^i}v^i − Σ(F²)_{z̄^i}v̄^i|
  double d1 = 0;      // max_i |(F²)_{z^i} + Σ_j (F²)_{z^j v^i}v^j − Σ_j (F²)_{z̄^j v^i}v̄^j|
  double c1 = 0;      // max_i |Σ_j (F²)_{z̄^j v^i}v̄^j − 3Σ_j (F²)_{z^j v^i}v^j|
  double r1 = 0;      // |Σ(F²)_{z̄^j}v̄^j − 3Σ(F²)_{z^j}v^j|
  double r2 = 0;      // |Σ(F²)_{z^j}v^j − 3Σ(F²)_{z̄^j}v̄^j|
  double f1 = 0;      // max(|Σ(F²)_{z^j}v^j|, |Σ(F²)_{z̄^j}v̄^j|)
  double v1 = 0;      // max_i |Σ_j (F²)_{z̄^j v^i}v̄^j|
  double zgrad2 = 0;  // max_i |(F²)_{z^i}|

  /// Stable (name, value) listing in the order above.
  std::vector<std::pair<std::string, double>> entries() const;
};

ProofChainReport proof_chain(const MetricField& metric, const ComplexTangentSample& s);
ProofChainReport proof_chain(const ComplexJet2& jet, std::span<const std::complex<double>> v);

enum class Verdict { Flat, NonFlat, Inconclusive };
enum class Classification { Minkowski, NonFlat, Inconclusive, Excluded };

std::string to_string(Verdict v);
std::string to_string(Classification c);

struct RigidityOptions {
  double tol_flat = 1e-8;     // relative norm at or below: flat
  double tol_nonflat = 1e-4;  // relative norm at or above: non-flat
  double tol_homog = 1e-9;    // relative complex-homogeneity residual admitted
};

/// Three-way verdict for one relative norm.
Verdict classify_norm(double relative, const RigidityOptions& opts);

struct RigiditySummary {
  int samples = 0;
  int failures = 0;
  std::string first_failure;
  double max_homogeneity_rel = 0;
  double max_pf_abs = 0, max_pf_rel = 0;
  double max_df_abs = 0, max_df_rel = 0;
  double max_zgrad_f = 0, max_zgrad_f_rel = 0;
  double max_zgrad_f2 = 0, max_zgrad_f2_rel = 0;
  Verdict pf = Verdict::Inconclusive;
  Verdict df = Verdict::Inconclusive;
  Verdict zgrad = Verdict::Inconclusive;
  Classification classification = Classification::Inconclusive;
  /// False when the verdicts contradict the rigidity statement: pf/df disagree
  /// outright, or a flat verdict co-occurs with a non-flat z-gradient.
  bool theorem_consistent = true;
};

/// Scans seeded samples of a complex metric. Metrics failing complex
/// homogeneity are classified Excluded; their residual maxima are still filled.
RigiditySummary rigidity_scan(const MetricField& metric, const SampleSpec& spec,
                              const RigidityOptions& opts = {});

}  // namespace finsler
