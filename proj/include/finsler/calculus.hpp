#pragma once

#include <Eigen/Core>
#include <span>

#include "finsler/metric.hpp"

namespace finsler {

/// Value and first/second partials of one scalar function of (x, u).
struct RealJetBlocks {
  double value = 0.0;
  Eigen::VectorXd dx;  // ∂/∂x^a
  Eigen::VectorXd du;  // ∂/∂u^a
  Eigen::MatrixXd xu;  // (a, b) = ∂²/∂x^b∂u^a
  Eigen::MatrixXd uu;  // (a, b) = ∂²/∂u^a∂u^b
};

/// Jets of F and of F².
struct RealJet2 {
  RealJetBlocks f;
  RealJetBlocks f2;
  int dim() const { return static_cast<int>(f.dx.size()); }
};

/// Wirtinger partials of one real-valued function of (z, v).
struct ComplexJetBlocks {
  double value = 0.0;
  Eigen::VectorXcd dz, dzbar, dv, dvbar;
  Eigen::MatrixXcd zv;     // (i, j) = ∂²/∂z^j∂v^i
  Eigen::MatrixXcd zbarv;  // (i, j) = ∂²/∂z̄^j∂v^i
  Eigen::MatrixXcd zvbar;  // (i, j) = ∂²/∂z^j∂v̄^i
  Eigen::MatrixXcd vvbar;  // (α, β) = ∂²/∂v^α∂v̄^β
};

struct ComplexJet2 {
  ComplexJetBlocks f;
  ComplexJetBlocks f2;
  int dim() const { return static_cast<int>(f.dz.size()); }
};

struct JetOptions {
  /// Jets cost O(m²) evaluations; refuse larger real dimensions unless raised.
  int max_real_dim = 8;
};

/// Exact (to rounding) jet by hyper-dual evaluation, one pass per variable pair.
RealJet2 real_jet(const MetricField& metric, const RealTangentSample& s, const JetOptions& opts = {});

/// Wirtinger jet assembled from the real jet of the packed 4n-variable function.
ComplexJet2 complex_jet(const MetricField& metric, const ComplexTangentSample& s,
                        const JetOptions& opts = {});

/// Real jet at packed coordinates for either metric kind.
RealJet2 packed_jet(const MetricField& metric, std::span<const double> x, std::span<const double> u,
                    const JetOptions& opts = {});

/// ∂/∂z^j = ½(∂/∂x^j − i∂/∂x^{j+n}), ∂/∂v^j = ½(∂/∂u^j − i∂/∂u^{j+n}) applied blockwise.
ComplexJetBlocks wirtinger(const RealJetBlocks& real);
ComplexJet2 wirtinger(const RealJet2& real);

struct FdOptions {
  double step = 1e-5;  // scaled by (1 + |coordinate|) per variable
  bool richardson = false;
};

/// Central-difference jets, independent of the hyper-dual path. Throws
/// DomainError when a stencil point leaves the domain.
RealJet2 fd_jet(const MetricField& metric, const RealTangentSample& s, const FdOptions& opts = {});
ComplexJet2 fd_jet(const MetricField& metric, const ComplexTangentSample& s, const FdOptions& opts = {});
RealJet2 fd_packed_jet(const MetricField& metric, std::span<const double> x, std::span<const double> u,
                       const FdOptions& opts = {});

/// Largest blockwise discrepancy max|a − b| / (1 + max|a|) over every block of F and F².
double jet_discrepancy(const RealJet2& a, const RealJet2& b);

}  // namespace finsler
