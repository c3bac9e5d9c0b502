#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "finsler/metric.hpp"

namespace finsler {

enum class BaseRegion { Ball, Box };

/// Seeded sampling recipe. Base points are uniform in a ball (or a cube of the
/// same half-width) centred at the origin and intersected with the metric's
/// domain by rejection; tangent vectors are uniform on the unit sphere.
///
/// The stream is std::mt19937_64 seeded with `seed`; uniforms take the top 53
/// bits, normals use Box-Muller. Both conversions are written out here rather
/// than delegated to <random> distributions, whose algorithms are unspecified.
struct SampleSpec {
  std::uint64_t seed = 1;
  int count = 200;
  BaseRegion region = BaseRegion::Ball;
  double radius = 0.8;
};

class SampleStream {
 public:
  explicit SampleStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  /// Standard normal.
  double normal();
  /// Uniform on the unit sphere of R^m.
  std::vector<double> unit_vector(int m);
  /// Uniform in the ball of radius r in R^m.
  std::vector<double> in_ball(int m, double r);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Samples in packed real coordinates (2n per part for complex metrics). Each
/// base point lies inside the domain with a 1e-3 margin. Throws UsageError when
/// rejection sampling cannot find domain points.
std::vector<RealTangentSample> generate_samples(const MetricField& metric, const SampleSpec& spec);

}  // namespace finsler
