#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dyncomp {

// Monomial bookkeeping for truncated multivariate Taylor polynomials in
// `num_vars` variables up to total degree `max_order`.
//
// Monomials are indexed in order of increasing degree, so the monomials of
// degree <= q always occupy the prefix [0, size(q)). Index 0 is the
// constant term and index 1 + v is the linear monomial of variable v.
class JetSpace {
 public:
  JetSpace(int num_vars, int max_order);

  int num_vars() const noexcept { return num_vars_; }
  int max_order() const noexcept { return max_order_; }

  // Number of monomials of degree <= order.
  int size(int order) const noexcept { return prefix_[static_cast<std::size_t>(order)]; }
  int degree(int idx) const noexcept { return degree_[static_cast<std::size_t>(idx)]; }
  std::span<const std::uint8_t> exponents(int idx) const noexcept {
    return {exps_.data() + static_cast<std::size_t>(idx) * static_cast<std::size_t>(num_vars_),
            static_cast<std::size_t>(num_vars_)};
  }

  // Index of the monomial with the given exponents, -1 if out of range.
  int index_of(std::span<const std::uint8_t> exps) const;

  // products(i)[j] = index of monomial_i * monomial_j, for every j with
  // degree(j) <= max_order - degree(i).
  std::span<const int> products(int i) const noexcept {
    const auto& row = products_[static_cast<std::size_t>(i)];
    return {row.data(), row.size()};
  }

  // Index of monomial_idx * x_var, -1 when that exceeds max_order.
  int raise(int idx, int var) const noexcept {
    return raise_[static_cast<std::size_t>(idx) * static_cast<std::size_t>(num_vars_) +
                  static_cast<std::size_t>(var)];
  }

 private:
  int num_vars_;
  int max_order_;
  std::vector<int> prefix_;
  std::vector<int> degree_;
  std::vector<std::uint8_t> exps_;
  std::vector<std::vector<int>> products_;
  std::vector<int> raise_;
};

// Truncated Taylor expansion f(z0 + h) = sum_b c_b h^b of a scalar function
// around a fixed base point, valid up to total degree order().
//
// Arithmetic truncates to the smaller operand order. derivative(v) returns
// the expansion of df/dz_v and so loses one order; this is what lets a
// recursion that needs partials of earlier stages stay exact.
class Jet {
 public:
  Jet(const JetSpace& space, int order);

  static Jet constant(const JetSpace& space, int order, double value);
  static Jet variable(const JetSpace& space, int order, int var, double value);

  const JetSpace& space() const noexcept { return *space_; }
  int order() const noexcept { return order_; }
  double value() const noexcept { return c_[0]; }
  std::span<const double> coefficients() const noexcept { return c_; }
  double& coefficient(int idx) { return c_[static_cast<std::size_t>(idx)]; }

  // df/dz_var at the base point (requires order() >= 1).
  double partial(int var) const;

  // Expansion of df/dz_var, of order order() - 1 (requires order() >= 1).
  Jet derivative(int var) const;

  // Restrict to a lower order.
  Jet truncated(int order) const;

  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator+=(double v) {
    c_[0] += v;
    return *this;
  }
  Jet& operator-=(double v) {
    c_[0] -= v;
    return *this;
  }
  Jet& operator*=(double s);

  // *this += scale * a * b, truncated to min(order(), a.order(), b.order()).
  void add_product(const Jet& a, const Jet& b, double scale = 1.0);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) { return a *= -1.0; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator*(const Jet& a, const Jet& b);

 private:
  void shrink_to(int order);

  const JetSpace* space_;
  int order_;
  std::vector<double> c_;
};

}  // namespace dyncomp
