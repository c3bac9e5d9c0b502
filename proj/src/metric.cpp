#include "finsler/metric.hpp"

#include <cmath>

#include "finsler/errors.hpp"

namespace finsler {

std::string to_string(MetricKind kind) { return kind == MetricKind::Real ? "real" : "complex"; }

RealTangentSample pack(const ComplexTangentSample& s) {
  const std::size_t n = s.z.size();
  if (s.v.size() != n) throw UsageError("complex sample: z and v differ in length");
  RealTangentSample r;
  r.x.resize(2 * n);
  r.u.resize(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    r.x[i] = s.z[i].real();
    r.x[i + n] = s.z[i].imag();
    r.u[i] = s.v[i].real();
    r.u[i + n] = s.v[i].imag();
  }
  return r;
}

ComplexTangentSample unpack(const RealTangentSample& s) {
  if (s.x.size() != s.u.size() || s.x.size() % 2 != 0) {
    throw UsageError("real sample cannot be read as complex: need equal, even lengths");
  }
  const std::size_t n = s.x.size() / 2;
  ComplexTangentSample c;
  c.z.resize(n);
  c.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.z[i] = {s.x[i], s.x[i + n]};
    c.v[i] = {s.u[i], s.u[i + n]};
  }
  return c;
}

DomainPredicate whole_space() {
  return [](std::span<const double>, double) { return true; };
}

DomainPredicate open_ball(double radius) {
  return [radius](std::span<const double> x, double margin) {
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    const double limit = radius - margin;
    return limit > 0.0 && r2 < limit * limit;
  };
}

double evaluate_packed(const MetricField& metric, std::span<const double> x,
                       std::span<const double> u) {
  const auto m = static_cast<std::size_t>(metric.real_dim());
  if (x.size() != m || u.size() != m) {
    throw UsageError(metric.name + ": expected " + std::to_string(m) + " real coordinates");
  }
  bool nonzero = false;
  for (double ui : u) nonzero = nonzero || ui != 0.0;
  if (!nonzero) throw UsageError(metric.name + ": tangent vector must be nonzero");
  if (!metric.contains(x)) throw DomainError(metric.name + ": base point outside the domain");
  const double f = metric.value(x, u);
  if (!std::isfinite(f)) throw NumericsError(metric.name + ": non-finite metric value");
  if (f < 0.0) throw NumericsError(metric.name + ": negative metric value");
  return f;
}

double evaluate(const MetricField& metric, const RealTangentSample& sample) {
  if (metric.kind != MetricKind::Real) {
    throw UsageError(metric.name + ": real sample passed to a complex metric");
  }
  return evaluate_packed(metric, sample.x, sample.u);
}

double evaluate(const MetricField& metric, const ComplexTangentSample& sample) {
  if (metric.kind != MetricKind::Complex) {
    throw UsageError(metric.name + ": complex sample passed to a real metric");
  }
  const RealTangentSample r = pack(sample);
  return evaluate_packed(metric, r.x, r.u);
}

MetricField to_real(const MetricField& metric) {
  if (metric.kind != MetricKind::Complex) {
    throw UsageError(metric.name + ": to_real expects a complex metric");
  }
  // The evaluators already work on packed real coordinates, so F° is a relabelling.
  MetricField r = metric;
  r.name = metric.name + "°";
  r.kind = MetricKind::Real;
  r.dim = 2 * metric.dim;
  return r;
}

MetricField scaled(const MetricField& metric, double factor) {
  if (!(factor > 0.0)) throw UsageError("scale factor must be positive");
  MetricField r = metric;
  r.value = [f = metric.value, factor](std::span<const double> x, std::span<const double> u) {
    return factor * f(x, u);
  };
  r.dual = [f = metric.dual, factor](std::span<const HyperDual> x, std::span<const HyperDual> u) {
    return HyperDual(factor) * f(x, u);
  };
  return r;
}

}  // namespace finsler
