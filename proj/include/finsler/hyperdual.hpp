#pragma once

#include <cmath>

#include "finsler/errors.hpp"

namespace finsler {

/// Second-order forward-mode number: value + d1·e1 + d2·e2 + d12·e1e2 with e1² = e2² = 0.
///
/// Seeding d1 on variable p and d2 on variable q makes d12 the exact mixed partial
/// ∂²f/∂p∂q after evaluating f; d1 and d2 carry ∂f/∂p and ∂f/∂q.
struct HyperDual {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d12 = 0.0;

  constexpr HyperDual() = default;
  constexpr HyperDual(double v) : value(v) {}  // NOLINT: implicit promotion of constants
  constexpr HyperDual(double v, double a, double b, double ab) : value(v), d1(a), d2(b), d12(ab) {}

  constexpr HyperDual& operator+=(const HyperDual& o) {
    value += o.value;
    d1 += o.d1;
    d2 += o.d2;
    d12 += o.d12;
    return *this;
  }
  constexpr HyperDual& operator-=(const HyperDual& o) {
    value -= o.value;
    d1 -= o.d1;
    d2 -= o.d2;
    d12 -= o.d12;
    return *this;
  }
  constexpr HyperDual& operator*=(const HyperDual& o) { return *this = *this * o; }
  constexpr HyperDual& operator/=(const HyperDual& o) { return *this = *this / o; }

  friend constexpr HyperDual operator-(const HyperDual& a) { return {-a.value, -a.d1, -a.d2, -a.d12}; }
  friend constexpr HyperDual operator+(HyperDual a, const HyperDual& b) { return a += b; }
  friend constexpr HyperDual operator-(HyperDual a, const HyperDual& b) { return a -= b; }
  friend constexpr HyperDual operator*(const HyperDual& f, const HyperDual& g) {
    return {f.value * g.value, f.value * g.d1 + f.d1 * g.value, f.value * g.d2 + f.d2 * g.value,
            f.value * g.d12 + f.d1 * g.d2 + f.d2 * g.d1 + f.d12 * g.value};
  }
  friend constexpr HyperDual operator/(const HyperDual& f, const HyperDual& g) {
    return f * reciprocal(g);
  }

  /// Chain rule for a scalar function with value f0, derivative f1, second derivative f2.
  constexpr HyperDual apply(double f0, double f1, double f2) const {
    return {f0, f1 * d1, f1 * d2, f1 * d12 + f2 * d1 * d2};
  }

  friend constexpr HyperDual reciprocal(const HyperDual& g) {
    const double inv = 1.0 / g.value;
    return g.apply(inv, -inv * inv, 2.0 * inv * inv * inv);
  }
};

inline constexpr double kNonsmoothThreshold = 1e-30;

// Plain overloads so generic code can call sqrt/exp/abs unqualified inside this namespace.
inline double sqrt(double x) { return std::sqrt(x); }
inline double exp(double x) { return std::exp(x); }
inline double abs(double x) { return std::abs(x); }

inline double value_of(double x) { return x; }
inline double value_of(const HyperDual& x) { return x.value; }

inline HyperDual sqrt(const HyperDual& x) {
  if (!(x.value >= kNonsmoothThreshold)) {
    throw NumericsError("sqrt differentiated at or below the nonsmooth point (argument " +
                        std::to_string(x.value) + ")");
  }
  const double s = std::sqrt(x.value);
  return x.apply(s, 0.5 / s, -0.25 / (s * x.value));
}

inline HyperDual exp(const HyperDual& x) {
  const double e = std::exp(x.value);
  return x.apply(e, e, e);
}

inline HyperDual abs(const HyperDual& x) {
  if (std::abs(x.value) < kNonsmoothThreshold) {
    throw NumericsError("abs differentiated at zero");
  }
  return x.value < 0 ? -x : x;
}

inline bool isfinite(const HyperDual& x) {
  return std::isfinite(x.value) && std::isfinite(x.d1) && std::isfinite(x.d2) &&
         std::isfinite(x.d12);
}

}  // namespace finsler
