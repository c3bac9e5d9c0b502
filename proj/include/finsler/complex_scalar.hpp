#pragma once

#include <cmath>
#include <complex>

#include "finsler/hyperdual.hpp"

namespace finsler {

/// Complex number over an arbitrary real scalar (double or HyperDual).
///
/// std::complex is only specified for float types, so derivative-carrying
/// complex arithmetic gets its own minimal type.
template <class S>
struct Complex {
  S re{};
  S im{};

  constexpr Complex() = default;
  constexpr Complex(S r) : re(r), im(0.0) {}  // NOLINT: real promotes to complex
  constexpr Complex(S r, S i) : re(r), im(i) {}

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator/(const Complex& a, const Complex& b) {
    const S den = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
  }
  Complex& operator+=(const Complex& o) { return *this = *this + o; }
  Complex& operator*=(const Complex& o) { return *this = *this * o; }
};

template <class S>
Complex<S> conj(const Complex<S>& a) {
  return {a.re, -a.im};
}

/// |a|², real and smooth everywhere.
template <class S>
S modulus_squared(const Complex<S>& a) {
  return a.re * a.re + a.im * a.im;
}

inline std::complex<double> to_std(const Complex<double>& a) { return {a.re, a.im}; }

}  // namespace finsler
