#include "gammaforge/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "gammaforge/errors.hpp"

namespace gammaforge {

ExprPtr Expr::make_constant(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Constant;
  e->constant = v;
  return e;
}

ExprPtr Expr::make_variable(int index) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Variable;
  e->variable = index;
  return e;
}

ExprPtr Expr::make_unary(Kind kind, ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->children = {std::move(a)};
  return e;
}

ExprPtr Expr::make_binary(Kind kind, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->children = {std::move(a), std::move(b)};
  return e;
}

ExprPtr Expr::make_call(std::string name, ExprPtr arg) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Call;
  e->function = std::move(name);
  e->children = {std::move(arg)};
  return e;
}

namespace {

bool is_function_name(std::string_view s) {
  return s == "sin" || s == "cos" || s == "exp" || s == "log" || s == "sqrt" || s == "tanh";
}

class Parser {
 public:
  Parser(std::string_view src, int dim) : src_(src), dim_(dim) {}

  ExprPtr parse() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError("empty expression", pos_);
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    while (true) {
      if (accept('+')) lhs = Expr::make_binary(Expr::Kind::Add, lhs, term());
      else if (accept('-')) lhs = Expr::make_binary(Expr::Kind::Sub, lhs, term());
      else return lhs;
    }
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    while (true) {
      if (accept('*')) lhs = Expr::make_binary(Expr::Kind::Mul, lhs, factor());
      else if (accept('/')) lhs = Expr::make_binary(Expr::Kind::Div, lhs, factor());
      else return lhs;
    }
  }

  ExprPtr factor() {
    if (accept('-')) return Expr::make_unary(Expr::Kind::Neg, factor());
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    if (accept('^')) return Expr::make_binary(Expr::Kind::Pow, base, factor());
    return base;
  }

  ExprPtr atom() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (accept('(')) {
      ExprPtr e = expr();
      expect(')');
      return e;
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  ExprPtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t n = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) throw ParseError("malformed number", start);
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;  // not an exponent; leave 'e' for the caller to reject
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc() || ptr != src_.data() + pos_) throw ParseError("malformed number", start);
    return Expr::make_constant(v);
  }

  ExprPtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '9') {
      const int index = name[1] - '0';
      if (index > dim_)
        throw ParseError("variable " + std::string(name) + " exceeds chart dimension " + std::to_string(dim_), start);
      return Expr::make_variable(index - 1);
    }
    if (!is_function_name(name)) throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    const std::size_t open = pos_;
    skip_ws();
    if (!accept('(')) throw ParseError("function '" + std::string(name) + "' requires an argument list", open);
    std::vector<ExprPtr> args{expr()};
    while (accept(',')) args.push_back(expr());
    expect(')');
    if (args.size() != 1)
      throw ParseError("function '" + std::string(name) + "' takes exactly one argument", start);
    return Expr::make_call(std::string(name), args.front());
  }

  std::string_view src_;
  int dim_;
  std::size_t pos_ = 0;
};

ScalarFunction function_for(const std::string& name) {
  if (name == "sin") return ScalarFunction::sin();
  if (name == "cos") return ScalarFunction::cos();
  if (name == "exp") return ScalarFunction::exp();
  if (name == "log") return ScalarFunction::log();
  if (name == "sqrt") return ScalarFunction::sqrt();
  if (name == "tanh") return ScalarFunction::tanh();
  throw InputError("unknown function " + name);
}

constexpr int kMaxUnrolledExponent = 12;

// Exponent of a Pow node when it is a small integer constant.
bool small_integer_exponent(const Expr& e, int& out) {
  if (!is_constant(e)) return false;
  const double v = evaluate(e, {});
  if (std::floor(v) != v || std::abs(v) > kMaxUnrolledExponent) return false;
  out = static_cast<int>(v);
  return true;
}

}  // namespace

ExprPtr parse_expr(std::string_view source, int dim) {
  if (dim < 1 || dim > 9) throw InputError("chart dimension must lie in [1, 9]");
  return Parser(source, dim).parse();
}

bool is_constant(const Expr& e) {
  if (e.kind == Expr::Kind::Variable) return false;
  for (const auto& c : e.children)
    if (!is_constant(*c)) return false;
  return true;
}

double evaluate(const Expr& e, std::span<const double> x) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::Constant: return e.constant;
    case K::Variable:
      if (static_cast<std::size_t>(e.variable) >= x.size()) throw ShapeError("point has fewer coordinates than expression");
      return x[e.variable];
    case K::Neg: return -evaluate(*e.children[0], x);
    case K::Add: return evaluate(*e.children[0], x) + evaluate(*e.children[1], x);
    case K::Sub: return evaluate(*e.children[0], x) - evaluate(*e.children[1], x);
    case K::Mul: return evaluate(*e.children[0], x) * evaluate(*e.children[1], x);
    case K::Div: {
      const double d = evaluate(*e.children[1], x);
      if (d == 0.0) throw DomainError("division by zero");
      return evaluate(*e.children[0], x) / d;
    }
    case K::Pow: {
      const double b = evaluate(*e.children[0], x);
      int n = 0;
      if (small_integer_exponent(*e.children[1], n)) {
        if (n < 0 && b == 0.0) throw DomainError("negative power of zero");
        double r = 1.0;
        for (int i = 0; i < std::abs(n); ++i) r *= b;
        return n < 0 ? 1.0 / r : r;
      }
      const double p = evaluate(*e.children[1], x);
      if (is_constant(*e.children[1])) return ScalarFunction::pow(p).derivatives(b, 0)[0];
      if (!(b > 0.0)) throw DomainError("log of non-positive value in variable exponent");
      return std::exp(p * std::log(b));
    }
    case K::Call: return function_for(e.function).derivatives(evaluate(*e.children[0], x), 0)[0];
  }
  throw InputError("corrupt expression node");
}

Jet eval_jet(const Expr& e, std::span<const double> x, int order) {
  using K = Expr::Kind;
  std::vector<double> base(x.begin(), x.end());
  switch (e.kind) {
    case K::Constant: return Jet::constant(e.constant, order, std::move(base));
    case K::Variable:
      if (static_cast<std::size_t>(e.variable) >= x.size()) throw ShapeError("point has fewer coordinates than expression");
      return Jet::coordinate(e.variable, order, std::move(base));
    case K::Neg: return -eval_jet(*e.children[0], x, order);
    case K::Add: return eval_jet(*e.children[0], x, order) + eval_jet(*e.children[1], x, order);
    case K::Sub: return eval_jet(*e.children[0], x, order) - eval_jet(*e.children[1], x, order);
    case K::Mul: return eval_jet(*e.children[0], x, order) * eval_jet(*e.children[1], x, order);
    case K::Div: return eval_jet(*e.children[0], x, order) / eval_jet(*e.children[1], x, order);
    case K::Pow: {
      Jet b = eval_jet(*e.children[0], x, order);
      int n = 0;
      if (small_integer_exponent(*e.children[1], n)) return pow(b, n);
      if (is_constant(*e.children[1])) return pow(b, evaluate(*e.children[1], {}));
      // b^e = exp(e log b)
      return exp(eval_jet(*e.children[1], x, order) * log(b));
    }
    case K::Call: return compose(function_for(e.function), eval_jet(*e.children[0], x, order));
  }
  throw InputError("corrupt expression node");
}

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* op_name(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Add: return "add";
    case Expr::Kind::Sub: return "sub";
    case Expr::Kind::Mul: return "mul";
    case Expr::Kind::Div: return "div";
    case Expr::Kind::Pow: return "pow";
    case Expr::Kind::Neg: return "neg";
    default: return "?";
  }
}

const char* op_symbol(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Add: return " + ";
    case Expr::Kind::Sub: return " - ";
    case Expr::Kind::Mul: return " * ";
    case Expr::Kind::Div: return " / ";
    case Expr::Kind::Pow: return "^";
    default: return "?";
  }
}

}  // namespace

std::string to_source(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::Constant: return "(" + format_number(e.constant) + ")";
    case K::Variable: return "x" + std::to_string(e.variable + 1);
    case K::Neg: return "(-" + to_source(*e.children[0]) + ")";
    case K::Call: return e.function + "(" + to_source(*e.children[0]) + ")";
    default: return "(" + to_source(*e.children[0]) + op_symbol(e.kind) + to_source(*e.children[1]) + ")";
  }
}

std::string describe(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::Constant: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%g", e.constant);
      return buf;
    }
    case K::Variable: return "x" + std::to_string(e.variable + 1);
    case K::Neg: return "neg(" + describe(*e.children[0]) + ")";
    case K::Call: return "call(" + e.function + ", " + describe(*e.children[0]) + ")";
    default: return std::string(op_name(e.kind)) + "(" + describe(*e.children[0]) + ", " + describe(*e.children[1]) + ")";
  }
}

}  // namespace gammaforge
