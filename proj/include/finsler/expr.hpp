#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "finsler/complex_scalar.hpp"
#include "finsler/metric.hpp"

namespace finsler::expr {

// Grammar (whitespace insignificant):
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' int)?
//   atom   := number | ident | fn '(' expr (',' expr)* ')' | '(' expr ')'
//
// '^' binds tighter than unary minus, so -a^2 is -(a^2).
//
// Identifiers: i (imaginary unit); z/v (complex) or x/u (real) as whole
// vectors, valid only inside normsq/herm; zK, z_K, vK, v_K (xK, uK) for
// components, 1-based; declared parameter names and their aliases pK / p_K.

enum class Function { Re, Im, Conj, Abs, Sqrt, Normsq, Herm };

enum class Group { Base, Tangent };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { Number, ImagUnit, Variable, VectorGroup, Param, Neg, Add, Sub, Mul, Div, Pow, Call };

  Kind kind = Kind::Number;
  std::size_t offset = 0;  // position in the source, for diagnostics
  double number = 0.0;
  Group group = Group::Base;
  int index = 0;     // 0-based component or parameter index
  int exponent = 0;  // Pow
  Function fn = Function::Re;
  bool nonsmooth = false;  // abs/sqrt: not differentiable where the argument vanishes
  std::vector<NodePtr> args;
};

/// Values bound to the free identifiers of an expression.
template <class S>
struct Bindings {
  std::span<const Complex<S>> base;     // z (or x promoted to complex)
  std::span<const Complex<S>> tangent;  // v (or u)
  std::span<const S> params;
};

/// Validated, immutable syntax tree.
class Expr {
 public:
  Expr(NodePtr root, MetricKind kind, int dim, std::vector<std::string> param_names,
       std::string source);

  const Node& root() const { return *root_; }
  MetricKind kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::vector<std::string>& param_names() const { return param_names_; }
  const std::string& source() const { return source_; }

  /// True when any abs/sqrt node appears.
  bool has_nonsmooth() const;

  template <class S>
  Complex<S> eval(const Bindings<S>& bindings) const;

 private:
  NodePtr root_;
  MetricKind kind_;
  int dim_;
  std::vector<std::string> param_names_;
  std::string source_;
};

/// Parses and validates. Throws SyntaxError, UnknownIdentifier, ArityError or
/// IndexOutOfRange, each carrying the byte offset of the offending token.
Expr parse(std::string_view source, MetricKind kind, int dim,
           std::vector<std::string> param_names = {});

/// Wraps an expression as a metric. The imaginary part of every evaluation must
/// stay below 1e-12 relative to the real part, else ResidualImaginaryPart.
MetricField metric_from_expr(const Expr& e, std::string name, std::span<const double> param_values);

extern template Complex<double> Expr::eval(const Bindings<double>&) const;
extern template Complex<HyperDual> Expr::eval(const Bindings<HyperDual>&) const;

}  // namespace finsler::expr
