#include <doctest.h>

#include <cmath>

#include "gammaforge/coefficient_field.hpp"
#include "gammaforge/errors.hpp"
#include "gammaforge/expr.hpp"
#include "helpers.hpp"

using namespace gammaforge;
using doctest::Approx;

TEST_CASE("parse structure") {
  CHECK(describe(*parse_expr("1/(x2^2)", 2)) == "div(1, pow(x2, 2))");
  CHECK(describe(*parse_expr("sin(x1)*sin(x1)", 1)) == "mul(call(sin, x1), call(sin, x1))");
  CHECK(describe(*parse_expr("2^3^2", 1)) == "pow(2, pow(3, 2))");
  CHECK(describe(*parse_expr("-x1^2", 1)) == "neg(pow(x1, 2))");
}

TEST_CASE("precedence and evaluation") {
  const auto e = parse_expr("-x1 + 2*x2 - exp(-x1^2/2)", 2);
  const double at[] = {1.0, 1.0};
  CHECK(evaluate(*e, at) == Approx(0.393469).epsilon(1e-6));
  const double p[] = {2.0};
  CHECK(evaluate(*parse_expr("2^3^2", 1), p) == 512.0);
  CHECK(evaluate(*parse_expr("-2^2", 1), p) == -4.0);
  CHECK(evaluate(*parse_expr("x1 - 1 - 1", 1), p) == 0.0);
  CHECK(evaluate(*parse_expr("8/2/2", 1), p) == 2.0);
  CHECK(evaluate(*parse_expr(" 1.5e1 * x1 ", 1), p) == 30.0);
  CHECK(evaluate(*parse_expr("2^-1", 1), p) == 0.5);
}

TEST_CASE("parse errors carry offsets") {
  try {
    parse_expr("1 + * x1", 1);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
  CHECK_THROWS_AS(parse_expr("foo(x1)", 1), ParseError);
  CHECK_THROWS_AS(parse_expr("x3", 2), ParseError);
  CHECK_THROWS_AS(parse_expr("x0", 2), ParseError);
  CHECK_THROWS_AS(parse_expr("sin(x1, x1)", 1), ParseError);
  CHECK_THROWS_AS(parse_expr("(x1", 1), ParseError);
  CHECK_THROWS_AS(parse_expr("", 1), ParseError);
  CHECK_THROWS_AS(parse_expr("x1 x1", 1), ParseError);
  CHECK_THROWS_AS(parse_expr("1e", 1), ParseError);
}

TEST_CASE("eval_jet examples") {
  const Jet a = eval_jet(*parse_expr("x1", 1), std::vector<double>{0.7}, 2);
  CHECK(a.value() == 0.7);
  CHECK(a.d(0) == 1.0);
  CHECK(a.d(0, 0) == 0.0);
  const Jet b = eval_jet(*parse_expr("x1*x2", 2), std::vector<double>{2.0, 3.0}, 2);
  CHECK(b.value() == 6.0);
  CHECK(b.d(0) == 3.0);
  CHECK(b.d(1) == 2.0);
  CHECK(b.d(0, 1) == 1.0);
  CHECK(b.d(0, 0) == 0.0);
  CHECK(b.d(1, 1) == 0.0);
  const Jet c = eval_jet(*parse_expr("1/(x2^2)", 2), std::vector<double>{0.0, 1.0}, 2);
  CHECK(c.value() == 1.0);
  CHECK(c.d(1) == Approx(-2.0));
  CHECK(c.d(1, 1) == Approx(6.0));
}

TEST_CASE("integer powers of negative bases") {
  const Jet j = eval_jet(*parse_expr("x1^3", 1), std::vector<double>{-2.0}, 3);
  CHECK(j.value() == -8.0);
  CHECK(j.d(0) == 12.0);
  CHECK(j.d(0, 0) == -12.0);
  CHECK(j.d(0, 0, 0) == 6.0);
  const Jet k = eval_jet(*parse_expr("x1^(-2)", 1), std::vector<double>{-2.0}, 1);
  CHECK(k.value() == 0.25);
  CHECK(k.d(0) == Approx(0.25));
  CHECK_THROWS_AS(eval_jet(*parse_expr("x1^x1", 1), std::vector<double>{-2.0}, 1), DomainError);
}

TEST_CASE("round trip through to_source") {
  const char* sources[] = {"-x1 + 2*x2 - exp(-x1^2/2)", "sin(x1)^2*cos(x2)/(1+x1^2)", "sqrt(1+x1^2+x2^2)^3",
                           "tanh(x1-x2)*log(2+sin(x1))", "x1^x2", "1e-3*x1 - -x2", "2^3^x1"};
  Rng rng(testing::test_seed());
  const std::pair<double, double> box[] = {{0.1, 1.5}, {0.1, 1.5}};
  for (const char* s : sources) {
    CAPTURE(s);
    const auto e = parse_expr(s, 2);
    const auto again = parse_expr(to_source(*e), 2);
    for (int k = 0; k < 100; ++k) {
      const auto x = random_point(box, rng);
      CHECK(std::abs(evaluate(*e, x) - evaluate(*again, x)) <= 1e-12 * std::max(1.0, std::abs(evaluate(*e, x))));
    }
  }
}

TEST_CASE("eval_jet agrees with plain evaluation and finite differences") {
  const char* sources[] = {"1/sin(x1)^2", "exp(3*sin(x1)*cos(x2)/5)", "4/(1+x1^2+x2^2)^2", "x2^2",
                           "-x1^2/2 - x2^2/2", "cos(x1)/sin(x1)", "sin(x1)*sin(x2)/2"};
  Rng rng(testing::test_seed() + 3);
  const std::pair<double, double> box[] = {{0.3, 2.5}, {0.5, 2.5}};
  for (const char* s : sources) {
    CAPTURE(s);
    const auto e = parse_expr(s, 2);
    for (int k = 0; k < 20; ++k) {
      const auto x = random_point(box, rng);
      const Jet j = eval_jet(*e, x, 1);
      CHECK(eval_jet(*e, x, 0).value() == Approx(evaluate(*e, x)).epsilon(1e-14));
      for (int i = 0; i < 2; ++i) {
        auto xp = x, xm = x;
        xp[i] += 1e-5;
        xm[i] -= 1e-5;
        const double fd = (evaluate(*e, xp) - evaluate(*e, xm)) / 2e-5;
        CHECK(std::abs(fd - j.d(i)) <= 1e-6 * std::max(1.0, std::abs(j.d(i))));
      }
    }
  }
}

TEST_CASE("coefficient fields") {
  const auto g = CoefficientField::symmetric(2, {{"1", "x1"}, {"ignored", "x2^2"}});
  const double x[] = {3.0, 2.0};
  const Eigen::MatrixXd m = g.matrix_value(x);
  CHECK(m(0, 1) == 3.0);
  CHECK(m(1, 0) == 3.0);
  CHECK(m(1, 1) == 4.0);
  CHECK(g.entry_source(0, 1) == "x1");
  CHECK_THROWS_AS(CoefficientField::vector(2, {"x1"}), InputError);
  CHECK_THROWS_AS(CoefficientField::scalar(1, "x2"), ParseError);
  const auto v = CoefficientField::vector(2, {"x1*x2", "x2"});
  const auto jets = v.vector_jets(x, 1);
  CHECK(jets[0].d(0) == 2.0);
  CHECK(jets[0].d(1) == 3.0);
}
