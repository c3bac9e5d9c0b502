#include <cmath>

#include "finsler/errors.hpp"
#include "finsler/expr.hpp"

namespace finsler::expr {
namespace {

constexpr double kImagTolerance = 1e-12;

template <class S>
class Evaluator {
 public:
  explicit Evaluator(const Bindings<S>& b) : b_(b) {}

  Complex<S> operator()(const Node& n) const {
    using K = Node::Kind;
    switch (n.kind) {
      case K::Number:
        return Complex<S>(S(n.number));
      case K::ImagUnit:
        return Complex<S>(S(0.0), S(1.0));
      case K::Variable:
        return group(n.group)[static_cast<std::size_t>(n.index)];
      case K::Param:
        return Complex<S>(b_.params[static_cast<std::size_t>(n.index)]);
      case K::Neg:
        return -(*this)(*n.args[0]);
      case K::Add:
        return (*this)(*n.args[0]) + (*this)(*n.args[1]);
      case K::Sub:
        return (*this)(*n.args[0]) - (*this)(*n.args[1]);
      case K::Mul:
        return (*this)(*n.args[0]) * (*this)(*n.args[1]);
      case K::Div: {
        const Complex<S> den = (*this)(*n.args[1]);
        if (std::sqrt(value_of(modulus_squared(den))) < kNonsmoothThreshold) {
          throw DivisionNearZero("division by a value below 1e-30 at offset " + std::to_string(n.offset));
        }
        return (*this)(*n.args[0]) / den;
      }
      case K::Pow:
        return power((*this)(*n.args[0]), n.exponent);
      case K::Call:
        return call(n);
      case K::VectorGroup:
        break;
    }
    throw UsageError("vector group evaluated as a scalar");
  }

 private:
  std::span<const Complex<S>> group(Group g) const { return g == Group::Base ? b_.base : b_.tangent; }

  static Complex<S> power(Complex<S> base, int exponent) {
    Complex<S> result(S(1.0));
    while (exponent > 0) {
      if (exponent & 1) result = result * base;
      base = base * base;
      exponent >>= 1;
    }
    return result;
  }

  static S real_sqrt(const Complex<S>& w, std::size_t offset, double floor) {
    const double re = value_of(w.re);
    const double im = value_of(w.im);
    if (std::abs(im) > kImagTolerance * std::max(1.0, std::abs(re))) {
      throw ResidualImaginaryPart("sqrt of a non-real argument at offset " + std::to_string(offset));
    }
    if (re < 0.0) {
      throw SqrtOfNegativeReal("sqrt of negative value " + std::to_string(re) + " at offset " +
                               std::to_string(offset));
    }
    if constexpr (std::is_same_v<S, HyperDual>) {
      if (re < floor) {
        throw NumericsError("differentiating through a nonsmooth point at offset " + std::to_string(offset));
      }
      const double s = std::sqrt(re);
      return w.re.apply(s, 0.5 / s, -0.25 / (s * re));
    } else {
      (void)floor;
      return std::sqrt(w.re);
    }
  }

  Complex<S> call(const Node& n) const {
    switch (n.fn) {
      case Function::Re:
        return Complex<S>((*this)(*n.args[0]).re);
      case Function::Im:
        return Complex<S>((*this)(*n.args[0]).im);
      case Function::Conj:
        return conj((*this)(*n.args[0]));
      case Function::Sqrt:
        return Complex<S>(real_sqrt((*this)(*n.args[0]), n.offset, kNonsmoothThreshold));
      case Function::Abs: {
        // |w| = sqrt(w·conj(w)); the floor is on |w|, so 1e-60 on its square.
        const Complex<S> w = (*this)(*n.args[0]);
        return Complex<S>(real_sqrt(Complex<S>(modulus_squared(w)), n.offset,
                                    kNonsmoothThreshold * kNonsmoothThreshold));
      }
      case Function::Normsq: {
        S sum(0.0);
        for (const auto& c : group(n.args[0]->group)) sum += modulus_squared(c);
        return Complex<S>(sum);
      }
      case Function::Herm: {
        const auto a = group(n.args[0]->group);
        const auto b = group(n.args[1]->group);
        Complex<S> sum(S(0.0));
        for (std::size_t k = 0; k < a.size(); ++k) sum += a[k] * conj(b[k]);
        return sum;
      }
    }
    throw UsageError("unknown function");
  }

  const Bindings<S>& b_;
};

template <class S>
S metric_value(const Expr& e, std::span<const S> x, std::span<const S> u, std::span<const S> params) {
  const std::size_t n = static_cast<std::size_t>(e.dim());
  std::vector<Complex<S>> base(n), tangent(n);
  if (e.kind() == MetricKind::Complex) {
    for (std::size_t k = 0; k < n; ++k) {
      base[k] = {x[k], x[k + n]};
      tangent[k] = {u[k], u[k + n]};
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      base[k] = Complex<S>(x[k]);
      tangent[k] = Complex<S>(u[k]);
    }
  }
  const Complex<S> r = e.eval(Bindings<S>{base, tangent, params});
  const double re = value_of(r.re);
  const double im = value_of(r.im);
  if (std::abs(im) > kImagTolerance * std::max(1.0, std::abs(re))) {
    throw ResidualImaginaryPart("metric expression has imaginary part " + std::to_string(im));
  }
  return r.re;
}

}  // namespace

template <class S>
Complex<S> Expr::eval(const Bindings<S>& bindings) const {
  const auto n = static_cast<std::size_t>(dim_);
  if (bindings.base.size() != n || bindings.tangent.size() != n ||
      bindings.params.size() != param_names_.size()) {
    throw UsageError("incomplete bindings for expression '" + source_ + "'");
  }
  return Evaluator<S>(bindings)(*root_);
}

template Complex<double> Expr::eval(const Bindings<double>&) const;
template Complex<HyperDual> Expr::eval(const Bindings<HyperDual>&) const;

MetricField metric_from_expr(const Expr& e, std::string name, std::span<const double> param_values) {
  if (param_values.size() != e.param_names().size()) {
    throw UsageError("expression declares " + std::to_string(e.param_names().size()) +
                     " parameters, got " + std::to_string(param_values.size()));
  }
  Params params;
  for (std::size_t k = 0; k < param_values.size(); ++k) params[e.param_names()[k]] = param_values[k];

  std::vector<double> values(param_values.begin(), param_values.end());
  std::vector<HyperDual> dual_values(values.begin(), values.end());
  MetricField m;
  m.name = std::move(name);
  m.kind = e.kind();
  m.dim = e.dim();
  m.params = std::move(params);
  m.value = [e, values](std::span<const double> x, std::span<const double> u) {
    return metric_value<double>(e, x, u, values);
  };
  m.dual = [e, dual_values](std::span<const HyperDual> x, std::span<const HyperDual> u) {
    return metric_value<HyperDual>(e, x, u, dual_values);
  };
  m.domain = whole_space();
  return m;
}

}  // namespace finsler::expr
