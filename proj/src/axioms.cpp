#include "finsler/axioms.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "finsler/errors.hpp"

namespace finsler {
namespace {

constexpr double kSymmetryTol = 1e-10;

double scaled_value(const MetricField& metric, std::span<const double> x, std::span<const double> u,
                    std::complex<double> lambda) {
  const int m = metric.real_dim();
  std::vector<double> su(u.begin(), u.end());
  if (metric.kind == MetricKind::Real) {
    for (auto& ui : su) ui *= lambda.real();
  } else {
    const int n = m / 2;
    for (int k = 0; k < n; ++k) {
      const std::complex<double> vk = lambda * std::complex<double>(u[k], u[k + n]);
      su[k] = vk.real();
      su[k + n] = vk.imag();
    }
  }
  return evaluate_packed(metric, x, su);
}

double packed_homogeneity(const MetricField& metric, std::span<const double> x, std::span<const double> u,
                          std::span<const std::complex<double>> scalars, bool positive_only) {
  const double f = evaluate_packed(metric, x, u);
  double worst = 0.0;
  for (const auto& lambda : scalars) {
    if (lambda == 0.0) throw UsageError("homogeneity scalars must be nonzero");
    const bool is_real = lambda.imag() == 0.0;
    if (metric.kind == MetricKind::Real && !is_real) {
      throw UsageError(metric.name + ": complex scalar applied to a real metric");
    }
    if (positive_only && !(is_real && lambda.real() > 0.0)) continue;
    worst = std::max(worst, std::abs(scaled_value(metric, x, u, lambda) - std::abs(lambda) * f));
  }
  return worst;
}

template <class M>
void check_symmetric(const M& a, const char* what) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > kSymmetryTol * scale) {
    throw NumericsError(std::string(what) + " is not symmetric to 1e-10");
  }
}

FundamentalTensors tensors_from_jet(const RealJet2& jet, bool complex) {
  FundamentalTensors t;
  t.g = 0.5 * jet.f2.uu;
  check_symmetric(t.g, "fundamental tensor g");
  t.g = 0.5 * (t.g + t.g.transpose()).eval();
  t.g_def = definiteness(t.g);
  if (complex) {
    Eigen::MatrixXcd G = wirtinger(jet.f2).vvbar;
    check_symmetric(G, "fundamental tensor G");
    G = 0.5 * (G + G.adjoint()).eval();
    t.G_def = definiteness(G);
    t.G = std::move(G);
  }
  return t;
}

}  // namespace

std::vector<std::complex<double>> default_scalars(MetricKind kind) {
  std::vector<std::complex<double>> s{2.0, -1.0, 0.5};
  if (kind == MetricKind::Complex) {
    s.emplace_back(0.0, 1.0);
    s.push_back(std::polar(1.0, std::numbers::pi / 4));
    s.push_back(std::polar(2.0, 2.0));
  }
  return s;
}

double homogeneity_residual(const MetricField& metric, const RealTangentSample& s,
                            std::span<const std::complex<double>> scalars) {
  return packed_homogeneity(metric, s.x, s.u, scalars, false);
}

double homogeneity_residual(const MetricField& metric, const ComplexTangentSample& s,
                            std::span<const std::complex<double>> scalars) {
  if (metric.kind != MetricKind::Complex) throw UsageError(metric.name + ": complex sample for a real metric");
  const RealTangentSample r = pack(s);
  return packed_homogeneity(metric, r.x, r.u, scalars, false);
}

double positive_homogeneity_residual(const MetricField& metric, const RealTangentSample& s,
                                     std::span<const std::complex<double>> scalars) {
  return packed_homogeneity(metric, s.x, s.u, scalars, true);
}

Definiteness definiteness(const Eigen::MatrixXd& symmetric) {
  Definiteness d;
  d.cholesky_ok = symmetric.llt().info() == Eigen::Success;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericsError("symmetric eigensolver failed");
  d.min_eigenvalue = es.eigenvalues().minCoeff();
  return d;
}

Definiteness definiteness(const Eigen::MatrixXcd& hermitian) {
  Definiteness d;
  d.cholesky_ok = hermitian.llt().info() == Eigen::Success;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericsError("Hermitian eigensolver failed");
  d.min_eigenvalue = es.eigenvalues().minCoeff();
  return d;
}

FundamentalTensors fundamental_tensors(const MetricField& metric, const RealTangentSample& packed,
                                       const JetOptions& opts) {
  return tensors_from_jet(packed_jet(metric, packed.x, packed.u, opts), metric.kind == MetricKind::Complex);
}

FundamentalTensors fundamental_tensors(const MetricField& metric, const ComplexTangentSample& s,
                                       const JetOptions& opts) {
  if (metric.kind != MetricKind::Complex) throw UsageError(metric.name + ": complex sample for a real metric");
  return fundamental_tensors(metric, pack(s), opts);
}

ConvexityReport strong_convexity_report(const MetricField& metric, const SampleSpec& spec, double tol_posdef) {
  if (metric.kind != MetricKind::Complex) {
    throw UsageError(metric.name + ": strong convexity of a complex metric needs a complex metric");
  }
  const MetricField real_form = to_real(metric);
  ConvexityReport r;
  r.min_eig_g = std::numeric_limits<double>::infinity();
  r.min_eig_G = std::numeric_limits<double>::infinity();
  for (const auto& s : generate_samples(metric, spec)) {
    ++r.samples;
    try {
      const RealJet2 jet = real_jet(real_form, s);
      const FundamentalTensors t = tensors_from_jet(jet, true);
      r.min_eig_g = std::min(r.min_eig_g, t.g_def.min_eigenvalue);
      r.min_eig_G = std::min(r.min_eig_G, t.G_def->min_eigenvalue);
      if (t.g_def.min_eigenvalue > tol_posdef && !(t.G_def->min_eigenvalue > tol_posdef)) {
        ++r.implication_violations;
      }
    } catch (const Error&) {
      ++r.failures;
    }
  }
  r.strongly_convex = r.failures == 0 && r.min_eig_g > tol_posdef;
  r.strongly_pseudoconvex = r.failures == 0 && r.min_eig_G > tol_posdef;
  return r;
}

}  // namespace finsler
