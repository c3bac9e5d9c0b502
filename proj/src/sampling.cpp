#include "finsler/sampling.hpp"

#include <cmath>
#include <numbers>

#include "finsler/errors.hpp"

namespace finsler {

double SampleStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double SampleStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<double> SampleStream::unit_vector(int m) {
  std::vector<double> v(static_cast<std::size_t>(m));
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (auto& vi : v) {
      vi = normal();
      norm2 += vi * vi;
    }
  } while (norm2 < 1e-20);
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& vi : v) vi *= inv;
  return v;
}

std::vector<double> SampleStream::in_ball(int m, double r) {
  std::vector<double> v = unit_vector(m);
  const double scale = r * std::pow(uniform(), 1.0 / m);
  for (auto& vi : v) vi *= scale;
  return v;
}

std::vector<RealTangentSample> generate_samples(const MetricField& metric, const SampleSpec& spec) {
  if (spec.count < 1) throw UsageError("sample count must be positive");
  if (!(spec.radius > 0.0)) throw UsageError("sampling radius must be positive");
  constexpr double kMargin = 1e-3;
  constexpr int kMaxTries = 10000;
  const int m = metric.real_dim();
  SampleStream stream(spec.seed);
  std::vector<RealTangentSample> out;
  out.reserve(static_cast<std::size_t>(spec.count));
  for (int k = 0; k < spec.count; ++k) {
    RealTangentSample s;
    int tries = 0;
    do {
      if (++tries > kMaxTries) {
        throw UsageError(metric.name + ": sampling region does not meet the domain");
      }
      if (spec.region == BaseRegion::Ball) {
        s.x = stream.in_ball(m, spec.radius);
      } else {
        s.x.resize(static_cast<std::size_t>(m));
        for (auto& xi : s.x) xi = spec.radius * (2.0 * stream.uniform() - 1.0);
      }
    } while (!metric.contains(s.x, kMargin));
    s.u = stream.unit_vector(m);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace finsler
