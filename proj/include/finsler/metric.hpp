#pragma once

#include <complex>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "finsler/hyperdual.hpp"

namespace finsler {

enum class MetricKind { Real, Complex };

std::string to_string(MetricKind kind);

/// Point of the slit tangent bundle in real coordinates: base point x, tangent u.
struct RealTangentSample {
  std::vector<double> x;
  std::vector<double> u;
};

/// Point of the holomorphic tangent bundle: base point z, tangent v.
struct ComplexTangentSample {
  std::vector<std::complex<double>> z;
  std::vector<std::complex<double>> v;
};

/// Real image of a complex sample: x^i = Re z^i, x^{i+n} = Im z^i, same for v.
RealTangentSample pack(const ComplexTangentSample& s);
/// Inverse of pack; requires an even number of real coordinates.
ComplexTangentSample unpack(const RealTangentSample& s);

/// Scalar evaluator over packed real coordinates. Complex metrics of dimension n
/// see 2n base and 2n tangent coordinates in the packing of pack().
template <class S>
using Evaluator = std::function<S(std::span<const S> x, std::span<const S> u)>;

/// Membership test for base points. margin > 0 shrinks the domain (used by
/// finite-difference stencils and geodesic early stopping).
using DomainPredicate = std::function<bool(std::span<const double> x, double margin)>;

using Params = std::map<std::string, double>;

/// An immutable Finsler-type function F on a single coordinate chart.
///
/// The same function is stored twice, once over double and once over
/// HyperDual, so that jets can be taken without finite differencing.
struct MetricField {
  std::string name;
  MetricKind kind = MetricKind::Real;
  int dim = 0;  // n for complex, m for real
  Params params;
  Evaluator<double> value;
  Evaluator<HyperDual> dual;
  DomainPredicate domain;

  /// Number of real base (and tangent) coordinates: m, or 2n for complex metrics.
  int real_dim() const { return kind == MetricKind::Complex ? 2 * dim : dim; }
  bool contains(std::span<const double> x, double margin = 0.0) const {
    return !domain || domain(x, margin);
  }
};

DomainPredicate whole_space();
/// Open Euclidean ball |x| < radius - margin.
DomainPredicate open_ball(double radius);

/// Builds a MetricField from a generic callable `fn(span<const S> x, span<const S> u) -> S`
/// instantiated for both double and HyperDual.
template <class Fn>
MetricField make_metric(std::string name, MetricKind kind, int dim, Params params, Fn fn,
                        DomainPredicate domain = whole_space()) {
  MetricField m;
  m.name = std::move(name);
  m.kind = kind;
  m.dim = dim;
  m.params = std::move(params);
  m.value = [fn](std::span<const double> x, std::span<const double> u) { return fn(x, u); };
  m.dual = [fn](std::span<const HyperDual> x, std::span<const HyperDual> u) { return fn(x, u); };
  m.domain = std::move(domain);
  return m;
}

/// F at a real sample. Complex metrics are rejected; convert with to_real first.
double evaluate(const MetricField& metric, const RealTangentSample& sample);
double evaluate(const MetricField& metric, const ComplexTangentSample& sample);

/// F at packed real coordinates, any kind. Shared by the analyzers.
double evaluate_packed(const MetricField& metric, std::span<const double> x,
                       std::span<const double> u);

/// The associated real function F°(x, u) = F(z, v) on R^{2n}.
MetricField to_real(const MetricField& metric);

/// c·F for c > 0, same kind and domain.
MetricField scaled(const MetricField& metric, double factor);

}  // namespace finsler
