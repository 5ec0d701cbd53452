#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hbvp/chebyshev.hpp"

namespace hbvp {

// Evaluation failure: division by zero, powabs singularity hit exactly.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

enum class Op {
  Const,
  T,
  Eps,
  Add,
  Sub,
  Mul,
  Div,
  Pow,     // integer exponent
  Neg,
  Sin,
  Cos,
  Exp,
  Sqrt,
  PowAbs,  // |u|^beta
  Sign,    // sign(Re u), 0 at 0
  Interp,  // sampled Chebyshev data in t; produced internally, never parsed
};

// Immutable expression tree in the variables t and eps.
class Expr {
 public:
  Expr();  // the constant 0

  static Expr constant(cplx value);
  static Expr t();
  static Expr eps();
  static Expr interpolant(std::shared_ptr<const ChebInterpolant> data);

  // Unsimplified node construction, used by the parser.
  static Expr raw(Op op, std::vector<Expr> args);
  static Expr raw_pow(Expr base, int exponent);
  static Expr raw_powabs(Expr arg, double beta);

  Op op() const;
  cplx value() const;   // Const only
  int exponent() const; // Pow only
  double beta() const;  // PowAbs only
  const std::vector<Expr>& args() const;
  const ChebInterpolant& interpolant_data() const;

  bool is_constant() const { return op() == Op::Const; }
  bool is_zero() const;
  bool is_one() const;
  bool depends_on_t() const;
  bool depends_on_eps() const;

  cplx eval(double t, double eps) const;
  std::string to_string() const;

  friend bool operator==(const Expr& x, const Expr& y);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Builders below fold constants and drop additive/multiplicative identities.
Expr operator+(const Expr& x, const Expr& y);
Expr operator-(const Expr& x, const Expr& y);
Expr operator*(const Expr& x, const Expr& y);
Expr operator/(const Expr& x, const Expr& y);
Expr operator-(const Expr& x);
Expr pow(const Expr& base, int exponent);
Expr sin(const Expr& x);
Expr cos(const Expr& x);
Expr exp(const Expr& x);
Expr sqrt(const Expr& x);
Expr powabs(const Expr& x, double beta);
Expr sign(const Expr& x);

// Grammar:
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' ['-'] int)?
//   atom   := number | 'i' | 't' | 'eps' | func '(' args ')' | '(' expr ')'
//   func   := sin | cos | exp | sqrt | neg | sign | powabs
// powabs takes two arguments; the second must be a real constant.
Expr parse_expression(std::string_view source);

Expr diff_t(const Expr& e);
Expr diff_t(const Expr& e, int order);

// Replace eps by a numeric value and fold.
Expr substitute_eps(const Expr& e, double eps);

}  // namespace hbvp
