#include "hbvp/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace hbvp {

struct Expr::Node {
  Op op = Op::Const;
  cplx value = 0.0;
  int exponent = 0;
  double beta = 0.0;
  std::vector<Expr> args;
  std::shared_ptr<const ChebInterpolant> data;
};

Expr::Expr() : Expr(constant(0.0)) {}

Expr Expr::constant(cplx value) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::t() {
  static const Expr var = [] {
    auto n = std::make_shared<Node>();
    n->op = Op::T;
    return Expr(std::move(n));
  }();
  return var;
}

Expr Expr::eps() {
  static const Expr var = [] {
    auto n = std::make_shared<Node>();
    n->op = Op::Eps;
    return Expr(std::move(n));
  }();
  return var;
}

Expr Expr::interpolant(std::shared_ptr<const ChebInterpolant> data) {
  auto n = std::make_shared<Node>();
  n->op = Op::Interp;
  n->data = std::move(data);
  return Expr(std::move(n));
}

Expr Expr::raw(Op op, std::vector<Expr> args) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args = std::move(args);
  return Expr(std::move(n));
}

Expr Expr::raw_pow(Expr base, int exponent) {
  auto n = std::make_shared<Node>();
  n->op = Op::Pow;
  n->exponent = exponent;
  n->args = {std::move(base)};
  return Expr(std::move(n));
}

Expr Expr::raw_powabs(Expr arg, double beta) {
  auto n = std::make_shared<Node>();
  n->op = Op::PowAbs;
  n->beta = beta;
  n->args = {std::move(arg)};
  return Expr(std::move(n));
}

Op Expr::op() const { return node_->op; }
cplx Expr::value() const { return node_->value; }
int Expr::exponent() const { return node_->exponent; }
double Expr::beta() const { return node_->beta; }
const std::vector<Expr>& Expr::args() const { return node_->args; }
const ChebInterpolant& Expr::interpolant_data() const { return *node_->data; }

bool Expr::is_zero() const { return op() == Op::Const && value() == cplx(0.0); }
bool Expr::is_one() const { return op() == Op::Const && value() == cplx(1.0); }

bool Expr::depends_on_t() const {
  if (op() == Op::T || op() == Op::Interp) return true;
  for (const auto& a : args())
    if (a.depends_on_t()) return true;
  return false;
}

bool Expr::depends_on_eps() const {
  if (op() == Op::Eps) return true;
  for (const auto& a : args())
    if (a.depends_on_eps()) return true;
  return false;
}

bool operator==(const Expr& x, const Expr& y) {
  if (x.node_ == y.node_) return true;
  const auto& a = *x.node_;
  const auto& b = *y.node_;
  if (a.op != b.op || a.value != b.value || a.exponent != b.exponent || a.beta != b.beta ||
      a.data != b.data || a.args.size() != b.args.size())
    return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!(a.args[i] == b.args[i])) return false;
  return true;
}

cplx Expr::eval(double t, double eps) const {
  const auto& n = *node_;
  switch (n.op) {
    case Op::Const:
      return n.value;
    case Op::T:
      return t;
    case Op::Eps:
      return eps;
    case Op::Add:
      return n.args[0].eval(t, eps) + n.args[1].eval(t, eps);
    case Op::Sub:
      return n.args[0].eval(t, eps) - n.args[1].eval(t, eps);
    case Op::Mul:
      return n.args[0].eval(t, eps) * n.args[1].eval(t, eps);
    case Op::Div: {
      const cplx den = n.args[1].eval(t, eps);
      if (den == cplx(0.0)) throw EvalError("division by zero");
      return n.args[0].eval(t, eps) / den;
    }
    case Op::Pow: {
      const cplx base = n.args[0].eval(t, eps);
      if (n.exponent < 0 && base == cplx(0.0)) throw EvalError("negative power of zero");
      cplx result = 1.0;
      cplx factor = n.exponent < 0 ? 1.0 / base : base;
      for (unsigned k = static_cast<unsigned>(std::abs(n.exponent)); k; k >>= 1) {
        if (k & 1u) result *= factor;
        factor *= factor;
      }
      return result;
    }
    case Op::Neg:
      return -n.args[0].eval(t, eps);
    case Op::Sin:
      return std::sin(n.args[0].eval(t, eps));
    case Op::Cos:
      return std::cos(n.args[0].eval(t, eps));
    case Op::Exp:
      return std::exp(n.args[0].eval(t, eps));
    case Op::Sqrt:
      return std::sqrt(n.args[0].eval(t, eps));
    case Op::PowAbs: {
      const double mag = std::abs(n.args[0].eval(t, eps));
      if (mag == 0.0) {
        if (n.beta <= 0.0) throw EvalError("powabs singularity");
        return 0.0;
      }
      return std::pow(mag, n.beta);
    }
    case Op::Sign: {
      const double re = n.args[0].eval(t, eps).real();
      return re > 0.0 ? 1.0 : (re < 0.0 ? -1.0 : 0.0);
    }
    case Op::Interp:
      return (*n.data)(t);
  }
  return 0.0;
}

namespace {

std::string format_real(double x) {
  if (x == 0.0) return "0";
  if (x < 0.0) return "neg(" + format_real(-x) + ")";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_const(cplx v) {
  if (v.imag() == 0.0) return format_real(v.real());
  if (v.real() == 0.0 && v.imag() == 1.0) return "i";
  return "(" + format_real(v.real()) + "+" + format_real(v.imag()) + "*i)";
}

std::string call(const char* name, const Expr& a) { return std::string(name) + "(" + a.to_string() + ")"; }

std::string binary(const Expr& e, char symbol) {
  return "(" + e.args()[0].to_string() + symbol + e.args()[1].to_string() + ")";
}

}  // namespace

std::string Expr::to_string() const {
  const auto& n = *node_;
  switch (n.op) {
    case Op::Const:
      return format_const(n.value);
    case Op::T:
      return "t";
    case Op::Eps:
      return "eps";
    case Op::Add:
      return binary(*this, '+');
    case Op::Sub:
      return binary(*this, '-');
    case Op::Mul:
      return binary(*this, '*');
    case Op::Div:
      return binary(*this, '/');
    case Op::Pow:
      return "(" + n.args[0].to_string() + ")^" + std::to_string(n.exponent);
    case Op::Neg:
      return call("neg", n.args[0]);
    case Op::Sin:
      return call("sin", n.args[0]);
    case Op::Cos:
      return call("cos", n.args[0]);
    case Op::Exp:
      return call("exp", n.args[0]);
    case Op::Sqrt:
      return call("sqrt", n.args[0]);
    case Op::PowAbs:
      return "powabs(" + n.args[0].to_string() + ", " + format_real(n.beta) + ")";
    case Op::Sign:
      return call("sign", n.args[0]);
    case Op::Interp:
      return "interp[" + std::to_string(n.data->degree()) + "]";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Folding builders

Expr operator+(const Expr& x, const Expr& y) {
  if (x.is_constant() && y.is_constant()) return Expr::constant(x.value() + y.value());
  if (x.is_zero()) return y;
  if (y.is_zero()) return x;
  return Expr::raw(Op::Add, {x, y});
}

Expr operator-(const Expr& x, const Expr& y) {
  if (x.is_constant() && y.is_constant()) return Expr::constant(x.value() - y.value());
  if (y.is_zero()) return x;
  if (x.is_zero()) return -y;
  return Expr::raw(Op::Sub, {x, y});
}

Expr operator*(const Expr& x, const Expr& y) {
  if (x.is_constant() && y.is_constant()) return Expr::constant(x.value() * y.value());
  if (x.is_zero() || y.is_zero()) return Expr::constant(0.0);
  if (x.is_one()) return y;
  if (y.is_one()) return x;
  return Expr::raw(Op::Mul, {x, y});
}

Expr operator/(const Expr& x, const Expr& y) {
  if (x.is_constant() && y.is_constant() && !y.is_zero())
    return Expr::constant(x.value() / y.value());
  if (y.is_one()) return x;
  if (x.is_zero() && !y.is_zero()) return x;
  return Expr::raw(Op::Div, {x, y});
}

Expr operator-(const Expr& x) {
  if (x.is_constant()) return Expr::constant(-x.value());
  if (x.op() == Op::Neg) return x.args()[0];
  return Expr::raw(Op::Neg, {x});
}

Expr pow(const Expr& base, int exponent) {
  if (exponent == 0) return Expr::constant(1.0);
  if (exponent == 1) return base;
  if (base.is_constant() && (exponent > 0 || !base.is_zero()))
    return Expr::constant(Expr::raw_pow(base, exponent).eval(0.0, 0.0));
  return Expr::raw_pow(base, exponent);
}

namespace {

Expr unary(Op op, const Expr& x) {
  Expr e = Expr::raw(op, {x});
  if (x.is_constant()) return Expr::constant(e.eval(0.0, 0.0));
  return e;
}

}  // namespace

Expr sin(const Expr& x) { return unary(Op::Sin, x); }
Expr cos(const Expr& x) { return unary(Op::Cos, x); }
Expr exp(const Expr& x) { return unary(Op::Exp, x); }
Expr sqrt(const Expr& x) { return unary(Op::Sqrt, x); }
Expr sign(const Expr& x) { return unary(Op::Sign, x); }

Expr powabs(const Expr& x, double beta) {
  if (beta == 0.0 && !x.is_constant()) return Expr::raw_powabs(x, beta);
  Expr e = Expr::raw_powabs(x, beta);
  if (x.is_constant() && (beta > 0.0 || !x.is_zero())) return Expr::constant(e.eval(0.0, 0.0));
  return e;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse() {
    Expr e = expr();
    skip();
    if (pos_ != src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    const bool negate = accept('-');
    Expr lhs = term();
    if (negate) lhs = Expr::raw(Op::Neg, {lhs});
    for (;;) {
      if (accept('+'))
        lhs = Expr::raw(Op::Add, {lhs, term()});
      else if (accept('-'))
        lhs = Expr::raw(Op::Sub, {lhs, term()});
      else
        return lhs;
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      if (accept('*'))
        lhs = Expr::raw(Op::Mul, {lhs, factor()});
      else if (accept('/'))
        lhs = Expr::raw(Op::Div, {lhs, factor()});
      else
        return lhs;
    }
  }

  Expr factor() {
    Expr base = atom();
    if (!accept('^')) return base;
    const bool negative = accept('-');
    skip();
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    const long k = std::strtol(std::string(src_.substr(start, pos_ - start)).c_str(), nullptr, 10);
    if (k > 1000) fail("exponent too large");
    return Expr::raw_pow(base, negative ? -static_cast<int>(k) : static_cast<int>(k));
  }

  Expr atom() {
    skip();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      const std::string name(src_.substr(start, pos_ - start));
      if (name == "t") return Expr::t();
      if (name == "eps") return Expr::eps();
      if (name == "i") return Expr::constant(cplx(0.0, 1.0));
      return function(name, start);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      const std::size_t exp_start = pos_;
      digits();
      if (exp_start == pos_) pos_ = save;  // not an exponent after all
    }
    const std::string text(src_.substr(start, pos_ - start));
    if (text == ".") fail("malformed number");
    return Expr::constant(std::strtod(text.c_str(), nullptr));
  }

  Expr function(const std::string& name, std::size_t start) {
    static const char* unary_names[] = {"sin", "cos", "exp", "sqrt", "neg", "sign"};
    static const Op unary_ops[] = {Op::Sin, Op::Cos, Op::Exp, Op::Sqrt, Op::Neg, Op::Sign};
    for (std::size_t k = 0; k < std::size(unary_names); ++k) {
      if (name == unary_names[k]) {
        expect('(');
        Expr arg = expr();
        expect(')');
        return Expr::raw(unary_ops[k], {arg});
      }
    }
    if (name == "powabs") {
      expect('(');
      Expr arg = expr();
      expect(',');
      const std::size_t beta_pos = pos_;
      Expr beta = expr();
      expect(')');
      if (beta.depends_on_t() || beta.depends_on_eps())
        throw ParseError("powabs exponent must be a constant", beta_pos);
      const cplx b = beta.eval(0.0, 0.0);
      if (b.imag() != 0.0) throw ParseError("powabs exponent must be real", beta_pos);
      return Expr::raw_powabs(arg, b.real());
    }
    throw ParseError("unknown identifier '" + name + "'", start);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expression(std::string_view source) { return Parser(source).parse(); }

// ---------------------------------------------------------------------------
// Differentiation

Expr diff_t(const Expr& e) {
  const auto& a = e.args();
  switch (e.op()) {
    case Op::Const:
    case Op::Eps:
    case Op::Sign:
      return Expr::constant(0.0);
    case Op::T:
      return Expr::constant(1.0);
    case Op::Add:
      return diff_t(a[0]) + diff_t(a[1]);
    case Op::Sub:
      return diff_t(a[0]) - diff_t(a[1]);
    case Op::Mul:
      return diff_t(a[0]) * a[1] + a[0] * diff_t(a[1]);
    case Op::Div: {
      const Expr du = diff_t(a[0]);
      const Expr dv = diff_t(a[1]);
      if (dv.is_zero()) return du / a[1];
      return (du * a[1] - a[0] * dv) / pow(a[1], 2);
    }
    case Op::Pow: {
      const int k = e.exponent();
      return Expr::constant(static_cast<double>(k)) * pow(a[0], k - 1) * diff_t(a[0]);
    }
    case Op::Neg:
      return -diff_t(a[0]);
    case Op::Sin:
      return cos(a[0]) * diff_t(a[0]);
    case Op::Cos:
      return -(sin(a[0]) * diff_t(a[0]));
    case Op::Exp:
      return e * diff_t(a[0]);
    case Op::Sqrt:
      return diff_t(a[0]) / (Expr::constant(2.0) * e);
    case Op::PowAbs: {
      const double b = e.beta();
      if (b == 0.0) return Expr::constant(0.0);
      return Expr::constant(b) * powabs(a[0], b - 1.0) * sign(a[0]) * diff_t(a[0]);
    }
    case Op::Interp:
      return Expr::interpolant(
          std::make_shared<const ChebInterpolant>(e.interpolant_data().derivative()));
  }
  return Expr::constant(0.0);
}

Expr diff_t(const Expr& e, int order) {
  Expr d = e;
  for (int k = 0; k < order; ++k) d = diff_t(d);
  return d;
}

Expr substitute_eps(const Expr& e, double eps) {
  const auto& a = e.args();
  switch (e.op()) {
    case Op::Eps:
      return Expr::constant(eps);
    case Op::Const:
    case Op::T:
    case Op::Interp:
      return e;
    case Op::Add:
      return substitute_eps(a[0], eps) + substitute_eps(a[1], eps);
    case Op::Sub:
      return substitute_eps(a[0], eps) - substitute_eps(a[1], eps);
    case Op::Mul:
      return substitute_eps(a[0], eps) * substitute_eps(a[1], eps);
    case Op::Div: {
      const Expr den = substitute_eps(a[1], eps);
      if (den.is_zero()) throw EvalError("division by zero at eps = " + std::to_string(eps));
      return substitute_eps(a[0], eps) / den;
    }
    case Op::Pow:
      return pow(substitute_eps(a[0], eps), e.exponent());
    case Op::Neg:
      return -substitute_eps(a[0], eps);
    case Op::Sin:
      return sin(substitute_eps(a[0], eps));
    case Op::Cos:
      return cos(substitute_eps(a[0], eps));
    case Op::Exp:
      return exp(substitute_eps(a[0], eps));
    case Op::Sqrt:
      return sqrt(substitute_eps(a[0], eps));
    case Op::PowAbs:
      return powabs(substitute_eps(a[0], eps), e.beta());
    case Op::Sign:
      return sign(substitute_eps(a[0], eps));
  }
  return e;
}

}  // namespace hbvp
