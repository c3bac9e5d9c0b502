#pragma once

#include <Eigen/Core>
#include <complex>
#include <optional>
#include <vector>

#include "finsler/calculus.hpp"
#include "finsler/metric.hpp"
#include "finsler/sampling.hpp"

namespace finsler {

/// Default scalings: {2, -1, 0.5} for real metrics, plus {i, e^{iπ/4}, 2e^{2i}} for complex ones.
std::vector<std::complex<double>> default_scalars(MetricKind kind);

/// max over λ of |F(x, λu) − |λ|·F(x, u)|, base point fixed. Complex metrics
/// scale v by complex λ (packed coordinates); real metrics accept only real λ.
double homogeneity_residual(const MetricField& metric, const RealTangentSample& s,
                            std::span<const std::complex<double>> scalars);
double homogeneity_residual(const MetricField& metric, const ComplexTangentSample& s,
                            std::span<const std::complex<double>> scalars);

/// Same residual restricted to the positive real scalars of `scalars`.
double positive_homogeneity_residual(const MetricField& metric, const RealTangentSample& s,
                                     std::span<const std::complex<double>> scalars);

/// Smallest eigenvalue of a symmetric / Hermitian matrix together with a Cholesky verdict.
struct Definiteness {
  double min_eigenvalue = 0.0;
  bool cholesky_ok = false;
};
Definiteness definiteness(const Eigen::MatrixXd& symmetric);
Definiteness definiteness(const Eigen::MatrixXcd& hermitian);

struct FundamentalTensors {
  Eigen::MatrixXd g;                 // ½ ∂²F²/∂u^a∂u^b (real form for complex metrics)
  std::optional<Eigen::MatrixXcd> G; // ∂²F²/∂v^α∂v̄^β, complex metrics only
  Definiteness g_def;
  std::optional<Definiteness> G_def;
};

/// Throws NumericsError if g or G fails symmetry to 1e-10 relative.
FundamentalTensors fundamental_tensors(const MetricField& metric, const RealTangentSample& packed,
                                       const JetOptions& opts = {});
FundamentalTensors fundamental_tensors(const MetricField& metric, const ComplexTangentSample& s,
                                       const JetOptions& opts = {});

struct ConvexityReport {
  int samples = 0;
  int failures = 0;  // samples whose jet evaluation threw
  double min_eig_g = 0.0;
  double min_eig_G = 0.0;
  bool strongly_convex = false;
  bool strongly_pseudoconvex = false;
  /// Samples where g > 0 but G fails; the convexity chain says this never happens.
  int implication_violations = 0;
};

/// Samples a complex metric, checking g of F° and G of F at each sample.
/// Per-sample errors are counted, not thrown.
ConvexityReport strong_convexity_report(const MetricField& metric, const SampleSpec& spec,
                                        double tol_posdef = 1e-12);

}  // namespace finsler
