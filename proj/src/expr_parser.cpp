#include <cctype>
#include <charconv>
#include <optional>

#include "finsler/errors.hpp"
#include "finsler/expr.hpp"

namespace finsler::expr {
namespace {

constexpr int kMaxDepth = 200;

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    const auto c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(c) || (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      while (i < src.size() && (std::isdigit(static_cast<unsigned char>(src[i])) || src[i] == '.')) ++i;
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
          i = j;
          while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        }
      }
      out.push_back({Tok::Number, start, src.substr(start, i - start)});
      continue;
    }
    if (std::isalpha(c) || c == '_') {
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        ++i;
      }
      out.push_back({Tok::Ident, start, src.substr(start, i - start)});
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ',': k = Tok::Comma; break;
      default:
        throw SyntaxError("unexpected character", start);
    }
    out.push_back({k, start, src.substr(start, 1)});
    ++i;
  }
  out.push_back({Tok::End, src.size(), {}});
  return out;
}

std::optional<Function> function_named(std::string_view name) {
  if (name == "re") return Function::Re;
  if (name == "im") return Function::Im;
  if (name == "conj") return Function::Conj;
  if (name == "abs") return Function::Abs;
  if (name == "sqrt") return Function::Sqrt;
  if (name == "normsq") return Function::Normsq;
  if (name == "herm") return Function::Herm;
  return std::nullopt;
}

// Parses "K" or "_K" after a one-letter prefix; nullopt when not of that shape.
std::optional<long> index_suffix(std::string_view rest) {
  if (!rest.empty() && rest.front() == '_') rest.remove_prefix(1);
  if (rest.empty()) return std::nullopt;
  for (char ch : rest) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return std::nullopt;
  }
  if (rest.size() > 9) return 1'000'000'000L;  // out of range, reported by caller
  long k = 0;
  std::from_chars(rest.data(), rest.data() + rest.size(), k);
  return k;
}

class Parser {
 public:
  Parser(std::string_view src, MetricKind kind, int dim, const std::vector<std::string>& params)
      : tokens_(tokenize(src)), kind_(kind), dim_(dim), params_(params) {}

  NodePtr parse_all() {
    NodePtr e = parse_expr();
    if (peek().kind != Tok::End) throw SyntaxError("unexpected token '" + std::string(peek().text) + "'", peek().offset);
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) throw SyntaxError(std::string("expected ") + what, peek().offset);
    ++pos_;
  }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : p(p) {
      if (++p.depth_ > kMaxDepth) throw SyntaxError("expression nested too deeply", p.peek().offset);
    }
    ~DepthGuard() { --p.depth_; }
    Parser& p;
  };

  static NodePtr binary(Node::Kind kind, std::size_t offset, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->offset = offset;
    n->args = {std::move(a), std::move(b)};
    return n;
  }

  NodePtr parse_expr() {
    DepthGuard guard(*this);
    NodePtr lhs = parse_term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const Token& op = next();
      NodePtr rhs = parse_term();
      lhs = binary(op.kind == Tok::Plus ? Node::Kind::Add : Node::Kind::Sub, op.offset, lhs, rhs);
    }
    return lhs;
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const Token& op = next();
      NodePtr rhs = parse_factor();
      lhs = binary(op.kind == Tok::Star ? Node::Kind::Mul : Node::Kind::Div, op.offset, lhs, rhs);
    }
    return lhs;
  }

  NodePtr parse_factor() {
    DepthGuard guard(*this);
    if (peek().kind == Tok::Minus) {
      const Token& op = next();
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Neg;
      n->offset = op.offset;
      n->args = {scalar(parse_factor())};
      return n;
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (peek().kind != Tok::Caret) return base;
    const Token& caret = next();
    const Token& exp = peek();
    int value = 0;
    if (exp.kind != Tok::Number) throw SyntaxError("expected integer exponent", exp.offset);
    auto [ptr, ec] = std::from_chars(exp.text.data(), exp.text.data() + exp.text.size(), value);
    if (ec != std::errc() || ptr != exp.text.data() + exp.text.size()) {
      throw SyntaxError("expected integer exponent", exp.offset);
    }
    ++pos_;
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Pow;
    n->offset = caret.offset;
    n->exponent = value;
    n->args = {scalar(base)};
    return n;
  }

  NodePtr parse_atom() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::Number: {
        ++pos_;
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Number;
        n->offset = tok.offset;
        auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), n->number);
        if (ec != std::errc() || ptr != tok.text.data() + tok.text.size()) {
          throw SyntaxError("malformed number", tok.offset);
        }
        return n;
      }
      case Tok::LParen: {
        ++pos_;
        NodePtr inner = parse_expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident:
        ++pos_;
        if (auto fn = function_named(tok.text)) return parse_call(*fn, tok);
        return identifier(tok);
      case Tok::End:
        throw SyntaxError("unexpected end of input", tok.offset);
      default:
        throw SyntaxError("unexpected token '" + std::string(tok.text) + "'", tok.offset);
    }
  }

  NodePtr parse_call(Function fn, const Token& name) {
    expect(Tok::LParen, "'(' after function name");
    std::vector<NodePtr> args{parse_expr()};
    while (peek().kind == Tok::Comma) {
      ++pos_;
      args.push_back(parse_expr());
    }
    expect(Tok::RParen, "')'");

    const bool vector_fn = fn == Function::Normsq || fn == Function::Herm;
    const std::size_t arity = fn == Function::Herm ? 2 : 1;
    if (args.size() != arity) {
      throw ArityError(std::string(name.text) + " takes " + std::to_string(arity) + " argument(s), got " +
                           std::to_string(args.size()),
                       name.offset);
    }
    for (const auto& a : args) {
      const bool is_group = a->kind == Node::Kind::VectorGroup;
      if (vector_fn && !is_group) {
        throw ArityError(std::string(name.text) + " expects vector arguments such as " + base_name() +
                             " or " + tangent_name(),
                         a->offset);
      }
      if (!vector_fn && is_group) {
        throw ArityError(std::string(name.text) + " expects a scalar argument", a->offset);
      }
    }
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Call;
    n->offset = name.offset;
    n->fn = fn;
    n->nonsmooth = fn == Function::Abs || fn == Function::Sqrt;
    n->args = std::move(args);
    return n;
  }

  std::string base_name() const { return kind_ == MetricKind::Complex ? "z" : "x"; }
  std::string tangent_name() const { return kind_ == MetricKind::Complex ? "v" : "u"; }

  NodePtr identifier(const Token& tok) {
    auto n = std::make_shared<Node>();
    n->offset = tok.offset;
    const std::string_view id = tok.text;
    if (id == "i") {
      n->kind = Node::Kind::ImagUnit;
      return n;
    }
    for (std::size_t p = 0; p < params_.size(); ++p) {
      if (id == params_[p]) {
        n->kind = Node::Kind::Param;
        n->index = static_cast<int>(p);
        return n;
      }
    }
    const char base = base_name()[0];
    const char tangent = tangent_name()[0];
    const char lead = id.front();
    if (id.size() == 1 && (lead == base || lead == tangent)) {
      n->kind = Node::Kind::VectorGroup;
      n->group = lead == base ? Group::Base : Group::Tangent;
      return n;
    }
    if (lead == base || lead == tangent || lead == 'p') {
      if (auto k = index_suffix(id.substr(1))) {
        const long limit = lead == 'p' ? static_cast<long>(params_.size()) : dim_;
        if (*k < 1 || *k > limit) {
          throw IndexOutOfRange("index of '" + std::string(id) + "' outside 1.." + std::to_string(limit),
                                tok.offset);
        }
        n->index = static_cast<int>(*k - 1);
        if (lead == 'p') {
          n->kind = Node::Kind::Param;
        } else {
          n->kind = Node::Kind::Variable;
          n->group = lead == base ? Group::Base : Group::Tangent;
        }
        return n;
      }
    }
    throw UnknownIdentifier("unknown identifier '" + std::string(id) + "'", tok.offset);
  }

  // Vector groups may only appear as normsq/herm arguments.
  static NodePtr scalar(NodePtr n) {
    if (n->kind == Node::Kind::VectorGroup) {
      throw ArityError("vector used where a scalar is required", n->offset);
    }
    return n;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  MetricKind kind_;
  int dim_;
  const std::vector<std::string>& params_;
};

void check_scalar_operands(const Node& n) {
  for (const auto& a : n.args) {
    if (n.kind != Node::Kind::Call && a->kind == Node::Kind::VectorGroup) {
      throw ArityError("vector used where a scalar is required", a->offset);
    }
    check_scalar_operands(*a);
  }
}

bool any_nonsmooth(const Node& n) {
  if (n.nonsmooth) return true;
  for (const auto& a : n.args) {
    if (any_nonsmooth(*a)) return true;
  }
  return false;
}

}  // namespace

Expr::Expr(NodePtr root, MetricKind kind, int dim, std::vector<std::string> param_names,
           std::string source)
    : root_(std::move(root)),
      kind_(kind),
      dim_(dim),
      param_names_(std::move(param_names)),
      source_(std::move(source)) {}

bool Expr::has_nonsmooth() const { return any_nonsmooth(*root_); }

Expr parse(std::string_view source, MetricKind kind, int dim, std::vector<std::string> param_names) {
  if (dim < 1) throw UsageError("expression dimension must be positive");
  for (const auto& name : param_names) {
    if (name.empty() || function_named(name) || name == "i") {
      throw UsageError("invalid parameter name '" + name + "'");
    }
  }
  Parser parser(source, kind, dim, param_names);
  NodePtr root = parser.parse_all();
  if (root->kind == Node::Kind::VectorGroup) {
    throw ArityError("vector used where a scalar is required", root->offset);
  }
  check_scalar_operands(*root);
  return Expr(std::move(root), kind, dim, std::move(param_names), std::string(source));
}

}  // namespace finsler::expr
