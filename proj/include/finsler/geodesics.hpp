#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "finsler/metric.hpp"

namespace finsler {

/// G^a = ¼ g^{ab} (Σ_c (F²)_{x^c u^b} u^c − (F²)_{x^b}); geodesics solve ẍ + 2G(x, ẋ) = 0.
/// Throws SingularMetric where g is not positive definite.
Eigen::VectorXd spray_coefficients(const MetricField& metric, const RealTangentSample& s);

enum class Termination { Completed, LeftDomain, StepFailure };

std::string to_string(Termination t);

struct TracePoint {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> u;  // ẋ
};

struct GeodesicTrace {
  std::vector<TracePoint> samples;
  /// max_t dist(x(t), x0 + R·u0) / path length. Measured against the chord line,
  /// so reparametrised straight lines count as straight.
  double straightness_deviation = 0.0;
  double path_length = 0.0;
  Termination termination = Termination::Completed;
  std::string message;  // reason for early termination
};

struct GeodesicOptions {
  double domain_margin = 1e-3;  // stop once x is this close to the domain boundary
};

/// Classical RK4 with fixed step horizon/steps. Real metrics only.
GeodesicTrace integrate_geodesic(const MetricField& metric, std::span<const double> x0,
                                 std::span<const double> u0, double horizon, int steps,
                                 const GeodesicOptions& opts = {});

/// Distance of p from the line through `origin` spanned by `direction`.
double distance_to_line(std::span<const double> p, std::span<const double> origin,
                        std::span<const double> direction);

}  // namespace finsler
