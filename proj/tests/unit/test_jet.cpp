#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "dyncomp/jet.hpp"

using namespace dyncomp;

namespace {

int binomial(int n, int k) {
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

int mono(const JetSpace& s, std::vector<std::uint8_t> e) { return s.index_of(e); }

}  // namespace

TEST(Space, SizesAndOrdering) {
  for (int vars = 1; vars <= 5; ++vars) {
    const JetSpace s(vars, 4);
    for (int q = 0; q <= 4; ++q) EXPECT_EQ(s.size(q), binomial(vars + q, q));
    for (int i = 1; i < s.size(4); ++i) EXPECT_LE(s.degree(i - 1), s.degree(i));
    EXPECT_EQ(s.degree(0), 0);
    for (int v = 0; v < vars; ++v) {
      EXPECT_EQ(s.exponents(1 + v)[static_cast<std::size_t>(v)], 1);
      EXPECT_EQ(s.raise(0, v), 1 + v);
    }
  }
  EXPECT_THROW(JetSpace(2, 9), std::exception);
}

TEST(Space, ProductsAndRaise) {
  const JetSpace s(3, 3);
  for (int i = 0; i < s.size(3); ++i) {
    const auto row = s.products(i);
    for (int j = 0; j < static_cast<int>(row.size()); ++j) {
      std::vector<std::uint8_t> e(3);
      for (int v = 0; v < 3; ++v) e[static_cast<std::size_t>(v)] = s.exponents(i)[static_cast<std::size_t>(v)] + s.exponents(j)[static_cast<std::size_t>(v)];
      EXPECT_EQ(row[static_cast<std::size_t>(j)], s.index_of(e));
    }
    for (int v = 0; v < 3; ++v) {
      if (s.degree(i) == 3) {
        EXPECT_EQ(s.raise(i, v), -1);
      } else {
        std::vector<std::uint8_t> e(s.exponents(i).begin(), s.exponents(i).end());
        ++e[static_cast<std::size_t>(v)];
        EXPECT_EQ(s.raise(i, v), s.index_of(e));
      }
    }
  }
}

// (x + 2y)^2 * y around (1, -1): exact polynomial, so its jet is exact.
TEST(Arithmetic, PolynomialCoefficients) {
  const JetSpace s(2, 3);
  const Jet x = Jet::variable(s, 3, 0, 1.0);
  const Jet y = Jet::variable(s, 3, 1, -1.0);
  const Jet f = (x + 2.0 * y) * (x + 2.0 * y) * y;
  // f(1 + a, -1 + b) = (-1 + a + 2b)^2 (-1 + b)
  EXPECT_DOUBLE_EQ(f.value(), -1.0);
  EXPECT_DOUBLE_EQ(f.partial(0), 2.0);   // d/da at 0: 2(-1)(1)(-1)
  EXPECT_DOUBLE_EQ(f.partial(1), 5.0);   // 2(-1)(2)(-1) + 1
  EXPECT_DOUBLE_EQ(f.coefficients()[static_cast<std::size_t>(mono(s, {2, 0}))], -1.0);
  EXPECT_DOUBLE_EQ(f.coefficients()[static_cast<std::size_t>(mono(s, {1, 1}))], -4.0 - 2.0);
  EXPECT_DOUBLE_EQ(f.coefficients()[static_cast<std::size_t>(mono(s, {0, 2}))], -4.0 - 4.0);
  EXPECT_DOUBLE_EQ(f.coefficients()[static_cast<std::size_t>(mono(s, {2, 1}))], 1.0);
  EXPECT_DOUBLE_EQ(f.coefficients()[static_cast<std::size_t>(mono(s, {0, 3}))], 4.0);
  EXPECT_DOUBLE_EQ(f.coefficients()[static_cast<std::size_t>(mono(s, {1, 2}))], 4.0);
  EXPECT_DOUBLE_EQ(f.coefficients()[static_cast<std::size_t>(mono(s, {3, 0}))], 0.0);
}

TEST(Arithmetic, TruncationAndDerivative) {
  const JetSpace s(2, 4);
  const Jet x = Jet::variable(s, 4, 0, 0.5);
  const Jet y = Jet::variable(s, 2, 1, 2.0);
  const Jet p = x * y;  // order min(4, 2)
  EXPECT_EQ(p.order(), 2);
  EXPECT_DOUBLE_EQ(p.value(), 1.0);

  // g = x^4: dg/dx has order 3 and equals 4 x^3 as a jet.
  Jet g = x * x * x * x;
  const Jet dg = g.derivative(0);
  EXPECT_EQ(dg.order(), 3);
  const Jet expected = 4.0 * x.truncated(3) * x.truncated(3) * x.truncated(3);
  ASSERT_EQ(dg.coefficients().size(), expected.coefficients().size());
  for (std::size_t i = 0; i < dg.coefficients().size(); ++i) {
    EXPECT_NEAR(dg.coefficients()[i], expected.coefficients()[i], 1e-14);
  }
  // Second partial through derivative().partial().
  EXPECT_DOUBLE_EQ(dg.partial(0), 12.0 * 0.25);
}

TEST(Arithmetic, AddProductAndScalars) {
  const JetSpace s(3, 2);
  const Jet a = Jet::variable(s, 2, 0, 1.0);
  const Jet b = Jet::variable(s, 2, 2, 3.0);
  Jet acc = Jet::constant(s, 2, 0.5);
  acc.add_product(a, b, -2.0);
  acc += 1.0;
  acc -= 0.25;
  const Jet direct = Jet::constant(s, 2, 1.25) - 2.0 * (a * b);
  for (std::size_t i = 0; i < acc.coefficients().size(); ++i) {
    EXPECT_DOUBLE_EQ(acc.coefficients()[i], direct.coefficients()[i]);
  }
  EXPECT_DOUBLE_EQ(acc.partial(0), -6.0);
  EXPECT_DOUBLE_EQ(acc.partial(2), -2.0);
  EXPECT_DOUBLE_EQ(acc.partial(1), 0.0);
  const Jet n = -acc;
  EXPECT_DOUBLE_EQ(n.value(), -acc.value());
}

// Mixed partials of a product of three linear forms against their closed form.
TEST(Arithmetic, MixedPartials) {
  const JetSpace s(3, 3);
  const std::array<double, 3> z = {0.3, -1.1, 2.0};
  std::vector<Jet> v;
  for (int i = 0; i < 3; ++i) v.push_back(Jet::variable(s, 3, i, z[static_cast<std::size_t>(i)]));
  const Jet f = (v[0] + v[1]) * (v[1] - 3.0 * v[2]) * v[0];
  // d^2 f / dx0 dx1 with f = (x0 + x1)(x1 - 3 x2) x0:
  //   df/dx0 = (x1 - 3x2)(2 x0 + x1)
  //   d/dx1  = (2x0 + x1) + (x1 - 3x2)
  const double expected = (2 * z[0] + z[1]) + (z[1] - 3 * z[2]);
  EXPECT_NEAR(f.derivative(0).partial(1), expected, 1e-14);
  EXPECT_NEAR(f.coefficients()[static_cast<std::size_t>(mono(s, {1, 1, 0}))], expected, 1e-14);
  EXPECT_NEAR(f.derivative(0).derivative(1).partial(2), -3.0, 1e-14);
}
