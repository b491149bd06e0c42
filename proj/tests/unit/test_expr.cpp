#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "dyncomp/errors.hpp"
#include "dyncomp/expr.hpp"
#include "random_scenarios.hpp"

using namespace dyncomp;
using namespace dyncomp::expr;
using dyncomp::testing::Rng;
using dyncomp::testing::uniform;

TEST(Parse, SpecExamples) {
  EXPECT_EQ(parse("x1^2", 1), Expr::power(Expr::variable(1), 2));
  EXPECT_EQ(parse("sin(x2)", 2), Expr::unary(Op::sin, Expr::variable(2)));
  EXPECT_EQ(parse("0", 1), Expr::constant(0));
}

TEST(Parse, Precedence) {
  const double x[] = {2.0, 3.0};
  EXPECT_DOUBLE_EQ(eval(parse("x1 + x2 * x1", 2), x), 8.0);
  EXPECT_DOUBLE_EQ(eval(parse("-x1^2", 2), x), -4.0);
  EXPECT_DOUBLE_EQ(eval(parse("(x1 + x2) / x1 - 1", 2), x), 1.5);
  EXPECT_DOUBLE_EQ(eval(parse("x2^-1", 2), x), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(eval(parse("x1 - x2 - x1", 2), x), -3.0);
  EXPECT_DOUBLE_EQ(eval(parse("x2 / x1 / x1", 2), x), 0.75);
  EXPECT_DOUBLE_EQ(eval(parse("1.5e-1 * exp(0)", 2), x), 0.15);
}

TEST(Parse, ErrorPositions) {
  auto position_of = [](const char* src, int vars) -> std::size_t {
    try {
      parse(src, vars);
    } catch (const ParseError& e) {
      return e.position();
    }
    ADD_FAILURE() << "no error for " << src;
    return 0;
  };
  EXPECT_EQ(position_of("x3", 2), 0u);
  EXPECT_EQ(position_of("x0", 2), 0u);
  EXPECT_EQ(position_of("x1 + ", 1), 5u);
  EXPECT_EQ(position_of("sin x1", 1), 4u);
  EXPECT_EQ(position_of("x1 $ 2", 1), 3u);
  EXPECT_EQ(position_of("(x1", 1), 3u);
  EXPECT_THROW(parse("x1^0.5", 1), ParseError);
  EXPECT_THROW(parse("tan(x1)", 1), ParseError);
  EXPECT_THROW(parse("", 1), ParseError);
}

TEST(Eval, SpecExamples) {
  const double a[] = {3.0};
  EXPECT_DOUBLE_EQ(eval(parse("x1^2", 1), a), 9.0);
  const double b[] = {0.0};
  EXPECT_DOUBLE_EQ(eval(parse("cos(x1)", 1), b), 1.0);
  const double c[] = {0.0, std::numbers::pi / 2};
  EXPECT_DOUBLE_EQ(eval(parse("sin(x2)", 2), c), 1.0);
}

TEST(Eval, Faults) {
  const double x[] = {0.0};
  EXPECT_THROW(eval(parse("1 / x1", 1), x), EvalError);
  EXPECT_THROW(eval(parse("x2", 2), x), EvalError);
}

TEST(Diff, SpecExamples) {
  EXPECT_EQ(to_string(diff(parse("x1^2", 1), 1)), "2*x1");
  EXPECT_EQ(to_string(diff(parse("sin(x2)", 2), 2)), "cos(x2)");
  EXPECT_EQ(to_string(diff(parse("cos(x1)", 2), 2)), "0");
}

namespace {

Expr random_expr(Rng& rng, int depth, int vars) {
  const int pick = static_cast<int>(uniform(rng, 0.0, depth <= 0 ? 2.0 : 10.0));
  auto leaf = [&] {
    return Expr::variable(1 + static_cast<int>(uniform(rng, 0.0, vars - 1e-9)));
  };
  switch (pick) {
    case 0: return leaf();
    case 1: return Expr::constant(std::round(uniform(rng, -3.0, 3.0) * 4.0) / 4.0);
    case 2: return Expr::unary(Op::sin, random_expr(rng, depth - 1, vars));
    case 3: return Expr::unary(Op::cos, random_expr(rng, depth - 1, vars));
    case 4: return Expr::unary(Op::neg, random_expr(rng, depth - 1, vars));
    case 5: return Expr::binary(Op::add, random_expr(rng, depth - 1, vars), random_expr(rng, depth - 1, vars));
    case 6: return Expr::binary(Op::sub, random_expr(rng, depth - 1, vars), random_expr(rng, depth - 1, vars));
    case 7: return Expr::binary(Op::mul, random_expr(rng, depth - 1, vars), random_expr(rng, depth - 1, vars));
    case 8:
      // Denominator bounded away from zero.
      return Expr::binary(Op::div, random_expr(rng, depth - 1, vars),
                          Expr::binary(Op::add, Expr::constant(2.5), Expr::unary(Op::sin, leaf())));
    default: return Expr::power(random_expr(rng, depth - 1, vars), static_cast<int>(uniform(rng, 0.0, 3.99)));
  }
}

}  // namespace

TEST(Diff, MatchesFiniteDifferences) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int vars = 3;
    const Expr e = random_expr(rng, 4, vars);
    std::vector<double> x(vars);
    for (double& v : x) v = uniform(rng, -1.5, 1.5);
    for (int var = 1; var <= vars; ++var) {
      const double exact = eval(diff(e, var), x);
      const double d = 1e-3;
      auto at = [&](double s) {
        auto y = x;
        y[static_cast<std::size_t>(var - 1)] += s * d;
        return eval(e, y);
      };
      const double fd = (-at(2) + 8 * at(1) - 8 * at(-1) + at(-2)) / (12 * d);
      EXPECT_NEAR(exact, fd, 1e-6 * std::max(1.0, std::abs(exact))) << to_string(e) << " d/dx" << var;
    }
  }
}

TEST(Print, RoundTrips) {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const Expr e = random_expr(rng, 5, 3);
    const std::string text = to_string(e);
    const Expr back = parse(text, 3);
    // Negative literals come back as negations, so compare text and values.
    EXPECT_EQ(to_string(back), text);
    const std::vector<double> x{0.3, -0.7, 1.1};
    const double v = eval(e, x);
    EXPECT_NEAR(eval(back, x), v, 1e-12 * std::max(1.0, std::abs(v))) << text;
  }
}

TEST(Print, NegativeConstantsAndPowers) {
  for (const char* src : {"-x1^2", "(-x1)^2", "x1^-2", "x1 - -1", "2^3^2", "-(x1 - x2)", "sin(-x1)*x2"}) {
    const Expr e = parse(src, 2);
    EXPECT_EQ(parse(to_string(e), 2), e) << src;
  }
}

TEST(Structure, MaxVariable) {
  EXPECT_EQ(parse("sin(x1) + x3*x2", 3).max_variable(), 3);
  EXPECT_EQ(parse("4", 3).max_variable(), 0);
}
