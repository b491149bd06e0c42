#include "dyncomp/jet.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace dyncomp {

namespace {

// All exponent vectors of exactly total degree `deg`, lexicographically
// descending in the first variable.
void enumerate(int num_vars, int deg, int var, std::vector<std::uint8_t>& cur,
               std::vector<std::vector<std::uint8_t>>& out) {
  if (var == num_vars - 1) {
    cur[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(deg);
    out.push_back(cur);
    return;
  }
  for (int e = deg; e >= 0; --e) {
    cur[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(e);
    enumerate(num_vars, deg - e, var + 1, cur, out);
  }
  cur[static_cast<std::size_t>(var)] = 0;
}

}  // namespace

JetSpace::JetSpace(int num_vars, int max_order) : num_vars_(num_vars), max_order_(max_order) {
  if (num_vars < 1 || max_order < 0 || max_order > 8) {
    throw std::invalid_argument("JetSpace needs num_vars >= 1 and 0 <= max_order <= 8");
  }
  std::vector<std::vector<std::uint8_t>> monomials;
  std::vector<std::uint8_t> cur(static_cast<std::size_t>(num_vars), 0);
  for (int d = 0; d <= max_order; ++d) {
    enumerate(num_vars, d, 0, cur, monomials);
    prefix_.push_back(static_cast<int>(monomials.size()));
  }

  const auto count = monomials.size();
  std::map<std::vector<std::uint8_t>, int> index;
  exps_.reserve(count * static_cast<std::size_t>(num_vars));
  for (std::size_t i = 0; i < count; ++i) {
    index.emplace(monomials[i], static_cast<int>(i));
    exps_.insert(exps_.end(), monomials[i].begin(), monomials[i].end());
    int deg = 0;
    for (auto e : monomials[i]) deg += e;
    degree_.push_back(deg);
  }

  std::vector<std::uint8_t> sum(static_cast<std::size_t>(num_vars));
  products_.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const int limit = size(max_order - degree_[i]);
    auto& row = products_[i];
    row.resize(static_cast<std::size_t>(limit));
    for (int j = 0; j < limit; ++j) {
      for (int v = 0; v < num_vars; ++v) {
        sum[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(
            monomials[i][static_cast<std::size_t>(v)] +
            monomials[static_cast<std::size_t>(j)][static_cast<std::size_t>(v)]);
      }
      row[static_cast<std::size_t>(j)] = index.at(sum);
    }
  }

  raise_.assign(count * static_cast<std::size_t>(num_vars), -1);
  for (std::size_t i = 0; i < count; ++i) {
    if (degree_[i] == max_order) continue;
    for (int v = 0; v < num_vars; ++v) {
      auto up = monomials[i];
      up[static_cast<std::size_t>(v)] += 1;
      raise_[i * static_cast<std::size_t>(num_vars) + static_cast<std::size_t>(v)] = index.at(up);
    }
  }
}

int JetSpace::index_of(std::span<const std::uint8_t> exps) const {
  if (static_cast<int>(exps.size()) != num_vars_) return -1;
  int deg = 0;
  for (auto e : exps) deg += e;
  if (deg > max_order_) return -1;
  const int begin = deg == 0 ? 0 : size(deg - 1);
  const int end = size(deg);
  for (int i = begin; i < end; ++i) {
    if (std::equal(exps.begin(), exps.end(), exponents(i).begin())) return i;
  }
  return -1;
}

Jet::Jet(const JetSpace& space, int order)
    : space_(&space), order_(order), c_(static_cast<std::size_t>(space.size(order)), 0.0) {
  if (order < 0 || order > space.max_order()) throw std::invalid_argument("jet order out of range");
}

Jet Jet::constant(const JetSpace& space, int order, double value) {
  Jet j(space, order);
  j.c_[0] = value;
  return j;
}

Jet Jet::variable(const JetSpace& space, int order, int var, double value) {
  Jet j(space, order);
  j.c_[0] = value;
  if (order >= 1) j.c_[static_cast<std::size_t>(1 + var)] = 1.0;
  return j;
}

double Jet::partial(int var) const {
  if (order_ < 1) throw std::logic_error("partial of an order-0 jet");
  return c_[static_cast<std::size_t>(1 + var)];
}

Jet Jet::derivative(int var) const {
  if (order_ < 1) throw std::logic_error("derivative of an order-0 jet");
  Jet d(*space_, order_ - 1);
  const int n = space_->size(order_ - 1);
  for (int idx = 0; idx < n; ++idx) {
    const int src = space_->raise(idx, var);
    const double factor = static_cast<double>(space_->exponents(idx)[static_cast<std::size_t>(var)]) + 1.0;
    d.c_[static_cast<std::size_t>(idx)] = factor * c_[static_cast<std::size_t>(src)];
  }
  return d;
}

Jet Jet::truncated(int order) const {
  Jet t = *this;
  if (order < order_) t.shrink_to(order);
  return t;
}

void Jet::shrink_to(int order) {
  order_ = order;
  c_.resize(static_cast<std::size_t>(space_->size(order)));
}

Jet& Jet::operator+=(const Jet& other) {
  if (other.order_ < order_) shrink_to(other.order_);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  if (other.order_ < order_) shrink_to(other.order_);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= other.c_[i];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& c : c_) c *= s;
  return *this;
}

void Jet::add_product(const Jet& a, const Jet& b, double scale) {
  const int q = std::min({order_, a.order_, b.order_});
  if (q < order_) shrink_to(q);
  const int n = space_->size(q);
  for (int i = 0; i < n; ++i) {
    const double ai = a.c_[static_cast<std::size_t>(i)];
    if (ai == 0.0) continue;
    const double sa = scale * ai;
    const int limit = space_->size(q - space_->degree(i));
    const auto row = space_->products(i);
    for (int j = 0; j < limit; ++j) {
      const double bj = b.c_[static_cast<std::size_t>(j)];
      if (bj == 0.0) continue;
      c_[static_cast<std::size_t>(row[static_cast<std::size_t>(j)])] += sa * bj;
    }
  }
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet out(a.space(), std::min(a.order(), b.order()));
  out.add_product(a, b);
  return out;
}

}  // namespace dyncomp
