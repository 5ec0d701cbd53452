#include <doctest.h>

#include <cmath>
#include <random>

#include "hbvp/expr.hpp"

using namespace hbvp;

namespace {

double re(const Expr& e, double t, double eps = 0.0) { return e.eval(t, eps).real(); }

}  // namespace

TEST_CASE("parse and evaluate") {
  CHECK(re(parse_expression("1+eps"), 0.3, 0.25) == doctest::Approx(1.25));
  CHECK(re(parse_expression("2*t^3 - t/4"), 2.0) == doctest::Approx(15.5));
  CHECK(re(parse_expression("-t^2"), 3.0) == doctest::Approx(-9.0));
  CHECK(re(parse_expression("t^-2"), 2.0) == doctest::Approx(0.25));
  CHECK(re(parse_expression("sin(t/eps)"), 1.0, 0.5) == doctest::Approx(std::sin(2.0)));
  CHECK(re(parse_expression("exp(t) + cos(0)"), 0.0) == doctest::Approx(2.0));
  CHECK(re(parse_expression("powabs(t-0.5, 0.5)"), 0.25) == doctest::Approx(0.5));
  CHECK(re(parse_expression("neg(3)"), 0.0) == doctest::Approx(-3.0));
  CHECK(re(parse_expression("sign(t-1)"), 0.0) == doctest::Approx(-1.0));
  CHECK(re(parse_expression("sign(0)"), 0.0) == 0.0);
  CHECK(parse_expression("i*i").eval(0, 0) == cplx(-1.0, 0.0));
  CHECK(re(parse_expression("sqrt(4)"), 0.0) == doctest::Approx(2.0));
  CHECK(re(parse_expression("2.5e-1"), 0.0) == doctest::Approx(0.25));
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse_expression("1+"), ParseError);
  CHECK_THROWS_AS(parse_expression("foo(t)"), ParseError);
  CHECK_THROWS_AS(parse_expression("t^1.5"), ParseError);
  CHECK_THROWS_AS(parse_expression("(t"), ParseError);
  CHECK_THROWS_AS(parse_expression("powabs(t, t)"), ParseError);
  try {
    parse_expression("t + * 2");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("evaluation errors") {
  CHECK_THROWS_AS(parse_expression("1/t").eval(0.0, 0.0), EvalError);
  CHECK_THROWS_AS(parse_expression("powabs(t, -1)").eval(0.0, 0.0), EvalError);
  CHECK_NOTHROW(parse_expression("powabs(t, 0.5)").eval(0.0, 0.0));
}

TEST_CASE("symbolic derivatives match hand-computed ones") {
  // d/dt t^3 sin t = 3t^2 sin t + t^3 cos t
  const Expr e = parse_expression("t^3*sin(t)");
  const double t = 0.7;
  CHECK(re(diff_t(e), t) == doctest::Approx(3 * t * t * std::sin(t) + t * t * t * std::cos(t)));
  // d2/dt2 exp(2t) = 4 exp(2t)
  CHECK(re(diff_t(parse_expression("exp(2*t)"), 2), t) == doctest::Approx(4 * std::exp(2 * t)));
  // d/dt |t-1/2|^{3/2} = 3/2 |t-1/2|^{1/2} sign(t-1/2)
  const Expr p = parse_expression("powabs(t-0.5, 1.5)");
  CHECK(re(diff_t(p), 0.1) == doctest::Approx(-1.5 * std::sqrt(0.4)));
  CHECK(re(diff_t(p), 0.9) == doctest::Approx(1.5 * std::sqrt(0.4)));
  // quotient rule: d/dt 1/(1+t^2) = -2t/(1+t^2)^2
  CHECK(re(diff_t(parse_expression("1/(1+t^2)")), 2.0) == doctest::Approx(-4.0 / 25.0));
  CHECK(diff_t(parse_expression("eps^2")).is_zero());
}

TEST_CASE("printing round trips through the parser") {
  std::mt19937 rng(7);
  const char* samples[] = {"sin(t/eps)*t^2", "exp(-t)+powabs(t-0.3, 0.25)", "1/(2+cos(t))",
                           "neg(t)^3 - i*t", "sqrt(1+t)*sign(t-0.5)"};
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (const char* s : samples) {
    const Expr e = parse_expression(s);
    const Expr back = parse_expression(e.to_string());
    for (int k = 0; k < 10; ++k) {
      const double t = u(rng);
      const double eps = u(rng);
      CHECK(std::abs(e.eval(t, eps) - back.eval(t, eps)) <= 1e-14 * (1.0 + std::abs(e.eval(t, eps))));
    }
  }
}

TEST_CASE("derivative agrees with finite differences (property)") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  const char* samples[] = {"t^4 - 3*t", "sin(3*t)*exp(t)", "1/(1+t)", "cos(t)^2", "powabs(t+1, 2.5)"};
  for (const char* s : samples) {
    const Expr e = parse_expression(s);
    const Expr d = diff_t(e);
    for (int k = 0; k < 20; ++k) {
      const double t = u(rng);
      const double h = 1e-5;
      const double fd = (re(e, t + h) - re(e, t - h)) / (2 * h);
      CHECK(re(d, t) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("substitute_eps folds to constants") {
  const Expr e = substitute_eps(parse_expression("eps*2+1"), 0.25);
  REQUIRE(e.is_constant());
  CHECK(e.value().real() == doctest::Approx(1.5));
  CHECK_FALSE(substitute_eps(parse_expression("t*eps"), 3.0).depends_on_eps());
}

TEST_CASE("folding builders drop identities") {
  const Expr t = Expr::t();
  CHECK(t * Expr::constant(1.0) == t);
  CHECK(t + Expr::constant(0.0) == t);
  CHECK((t * Expr::constant(0.0)).is_zero());
  CHECK(pow(t, 1) == t);
  CHECK(pow(t, 0).is_one());
}
