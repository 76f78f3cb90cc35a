#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "umb/errors.hpp"

namespace umb {

/// Truncated Taylor expansion of a scalar at a point: the value together with
/// the partial derivatives up to `order` (at most 3) with respect to `dim`
/// base variables. All tensor coefficients are stored dense and symmetric;
/// arithmetic never produces coefficients beyond the minimum order of the
/// operands.
///
/// A computation that feeds coordinate jets (see `variable`) through ordinary
/// arithmetic yields the exact derivatives of the composite expression, up to
/// floating point rounding. This is the differentiation substrate for every
/// metric, form, and embedding evaluator in the library.
class Jet {
public:
  Jet() = default;

  static Jet constant(double v, int dim, int order) {
    if (order < 0 || order > 3) throw DomainError("jet order must be in 0..3");
    Jet j;
    j.dim_ = dim;
    j.order_ = order;
    j.value_ = v;
    j.alloc();
    return j;
  }

  /// Jet of the i-th coordinate function at a point with coordinates x:
  /// value x[i], gradient e_i, higher coefficients zero.
  static Jet variable(int i, double xi, int dim, int order) {
    if (i < 0 || i >= dim) throw DomainError("coordinate index out of range");
    Jet j = constant(xi, dim, order);
    if (order >= 1) j.d1_[static_cast<std::size_t>(i)] = 1.0;
    return j;
  }

  /// Constant with the dim/order of an existing jet. Closures use this so
  /// they stay agnostic of the base dimension they are evaluated in.
  static Jet constant_like(const Jet& proto, double v) {
    return constant(v, proto.dim_, proto.order_);
  }

  int dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }
  double value() const noexcept { return value_; }
  double& value() noexcept { return value_; }

  double d1(int i) const { return d1_[static_cast<std::size_t>(i)]; }
  double& d1(int i) { return d1_[static_cast<std::size_t>(i)]; }
  double d2(int i, int j) const { return d2_[static_cast<std::size_t>(i * dim_ + j)]; }
  double& d2(int i, int j) { return d2_[static_cast<std::size_t>(i * dim_ + j)]; }
  double d3(int i, int j, int k) const {
    return d3_[static_cast<std::size_t>((i * dim_ + j) * dim_ + k)];
  }
  double& d3(int i, int j, int k) {
    return d3_[static_cast<std::size_t>((i * dim_ + j) * dim_ + k)];
  }

  Jet truncated(int new_order) const {
    if (new_order >= order_) return *this;
    Jet r = constant(value_, dim_, new_order);
    if (new_order >= 1) r.d1_ = d1_;
    if (new_order >= 2) r.d2_ = d2_;
    return r;
  }

  /// Partial derivative with respect to base variable i, as a jet one order
  /// lower: shifts the coefficient tensors down one slot.
  Jet derive(int i) const {
    if (order_ < 1) throw DomainError("derive() on an order-0 jet");
    if (i < 0 || i >= dim_) throw DomainError("derive(): index out of range");
    Jet r = constant(d1(i), dim_, order_ - 1);
    if (r.order_ >= 1)
      for (int j = 0; j < dim_; ++j) r.d1(j) = d2(i, j);
    if (r.order_ >= 2)
      for (int j = 0; j < dim_; ++j)
        for (int k = 0; k < dim_; ++k) r.d2(j, k) = d3(i, j, k);
    return r;
  }

  Jet operator-() const {
    Jet r = *this;
    r.value_ = -r.value_;
    for (auto& v : r.d1_) v = -v;
    for (auto& v : r.d2_) v = -v;
    for (auto& v : r.d3_) v = -v;
    return r;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    auto [x, y, ord] = aligned(a, b);
    Jet r = constant(x.value_ + y.value_, x.dim_, ord);
    for (std::size_t t = 0; t < r.d1_.size(); ++t) r.d1_[t] = x.d1_[t] + y.d1_[t];
    for (std::size_t t = 0; t < r.d2_.size(); ++t) r.d2_[t] = x.d2_[t] + y.d2_[t];
    for (std::size_t t = 0; t < r.d3_.size(); ++t) r.d3_[t] = x.d3_[t] + y.d3_[t];
    return r;
  }

  friend Jet operator-(const Jet& a, const Jet& b) {
    auto [x, y, ord] = aligned(a, b);
    Jet r = constant(x.value_ - y.value_, x.dim_, ord);
    for (std::size_t t = 0; t < r.d1_.size(); ++t) r.d1_[t] = x.d1_[t] - y.d1_[t];
    for (std::size_t t = 0; t < r.d2_.size(); ++t) r.d2_[t] = x.d2_[t] - y.d2_[t];
    for (std::size_t t = 0; t < r.d3_.size(); ++t) r.d3_[t] = x.d3_[t] - y.d3_[t];
    return r;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    auto [x, y, ord] = aligned(a, b);
    const int n = x.dim_;
    Jet r = constant(x.value_ * y.value_, n, ord);
    if (ord >= 1)
      for (int i = 0; i < n; ++i) r.d1(i) = x.value_ * y.d1(i) + x.d1(i) * y.value_;
    if (ord >= 2)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          r.d2(i, j) = x.value_ * y.d2(i, j) + x.d1(i) * y.d1(j) +
                       x.d1(j) * y.d1(i) + x.d2(i, j) * y.value_;
    if (ord >= 3)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            r.d3(i, j, k) = x.value_ * y.d3(i, j, k) + x.d3(i, j, k) * y.value_ +
                            x.d1(i) * y.d2(j, k) + x.d1(j) * y.d2(i, k) +
                            x.d1(k) * y.d2(i, j) + x.d2(j, k) * y.d1(i) +
                            x.d2(i, k) * y.d1(j) + x.d2(i, j) * y.d1(k);
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    if (b.value_ == 0.0) throw DomainError("division by zero jet value");
    const double v = b.value_;
    return a * apply_series(b, 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v),
                            -6.0 / (v * v * v * v));
  }

  friend Jet operator+(const Jet& a, double s) {
    Jet r = a;
    r.value_ += s;
    return r;
  }
  friend Jet operator+(double s, const Jet& a) { return a + s; }
  friend Jet operator-(const Jet& a, double s) { return a + (-s); }
  friend Jet operator-(double s, const Jet& a) { return (-a) + s; }
  friend Jet operator*(const Jet& a, double s) {
    Jet r = a;
    r.value_ *= s;
    for (auto& v : r.d1_) v *= s;
    for (auto& v : r.d2_) v *= s;
    for (auto& v : r.d3_) v *= s;
    return r;
  }
  friend Jet operator*(double s, const Jet& a) { return a * s; }
  friend Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }
  friend Jet operator/(double s, const Jet& b) {
    if (b.value_ == 0.0) throw DomainError("division by zero jet value");
    const double v = b.value_;
    return apply_series(b, s / v, -s / (v * v), 2.0 * s / (v * v * v),
                        -6.0 * s / (v * v * v * v));
  }

  friend Jet sqrt(const Jet& a) {
    if (a.value_ <= 0.0) throw DomainError("sqrt of non-positive jet value");
    const double s = std::sqrt(a.value_);
    return apply_series(a, s, 0.5 / s, -0.25 / (s * a.value_),
                        0.375 / (s * a.value_ * a.value_));
  }

  friend Jet exp(const Jet& a) {
    const double e = std::exp(a.value_);
    return apply_series(a, e, e, e, e);
  }

  friend Jet log(const Jet& a) {
    if (a.value_ <= 0.0) throw DomainError("log of non-positive jet value");
    const double v = a.value_;
    return apply_series(a, std::log(v), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
  }

  friend Jet sin(const Jet& a) {
    const double s = std::sin(a.value_), c = std::cos(a.value_);
    return apply_series(a, s, c, -s, -c);
  }

  friend Jet cos(const Jet& a) {
    const double s = std::sin(a.value_), c = std::cos(a.value_);
    return apply_series(a, c, -s, -c, s);
  }

  friend Jet atan(const Jet& a) {
    const double v = a.value_;
    const double w = 1.0 + v * v;
    return apply_series(a, std::atan(v), 1.0 / w, -2.0 * v / (w * w),
                        (6.0 * v * v - 2.0) / (w * w * w));
  }

  /// Integer power, valid for any base value.
  friend Jet pow(const Jet& a, int p) {
    if (p < 0) return 1.0 / pow(a, -p);
    Jet r = constant(1.0, a.dim_, a.order_);
    Jet base = a;
    int e = p;
    while (e > 0) {
      if (e & 1) r = r * base;
      e >>= 1;
      if (e > 0) base = base * base;
    }
    return r;
  }

  /// Real power, requires a positive base value.
  friend Jet pow(const Jet& a, double p) {
    if (a.value_ <= 0.0) throw DomainError("pow of non-positive jet value");
    const double v = a.value_;
    return apply_series(a, std::pow(v, p), p * std::pow(v, p - 1.0),
                        p * (p - 1.0) * std::pow(v, p - 2.0),
                        p * (p - 1.0) * (p - 2.0) * std::pow(v, p - 3.0));
  }

private:
  void alloc() {
    const std::size_t n = static_cast<std::size_t>(dim_);
    if (order_ >= 1) d1_.assign(n, 0.0);
    if (order_ >= 2) d2_.assign(n * n, 0.0);
    if (order_ >= 3) d3_.assign(n * n * n, 0.0);
  }

  // Truncate both operands to the common order; dims must agree.
  struct Aligned {
    const Jet& x;
    const Jet& y;
    int order;
  };
  static Aligned aligned(const Jet& a, const Jet& b) {
    if (a.dim_ != b.dim_) throw DomainError("jet dimension mismatch");
    return {a, b, std::min(a.order_, b.order_)};
  }

  /// Composition with a scalar function given by its derivatives c0..c3 at
  /// a.value (third-order Faa di Bruno, symmetrized).
  static Jet apply_series(const Jet& a, double c0, double c1, double c2, double c3) {
    const int n = a.dim_;
    Jet r = constant(c0, n, a.order_);
    if (a.order_ >= 1)
      for (int i = 0; i < n; ++i) r.d1(i) = c1 * a.d1(i);
    if (a.order_ >= 2)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          r.d2(i, j) = c1 * a.d2(i, j) + c2 * a.d1(i) * a.d1(j);
    if (a.order_ >= 3)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            r.d3(i, j, k) = c1 * a.d3(i, j, k) +
                            c2 * (a.d1(i) * a.d2(j, k) + a.d1(j) * a.d2(i, k) +
                                  a.d1(k) * a.d2(i, j)) +
                            c3 * a.d1(i) * a.d1(j) * a.d1(k);
    return r;
  }

  int dim_ = 0;
  int order_ = 0;
  double value_ = 0.0;
  std::vector<double> d1_;
  std::vector<double> d2_;
  std::vector<double> d3_;
};

using JetVec = std::vector<Jet>;

/// A jet-evaluable scalar field on a chart.
using ScalarFieldFn = std::function<Jet(std::span<const Jet>)>;

/// Lift a chart point to coordinate jets of the given order.
inline JetVec lift_point(std::span<const double> x, int order) {
  const int n = static_cast<int>(x.size());
  JetVec out;
  out.reserve(x.size());
  for (int i = 0; i < n; ++i) out.push_back(Jet::variable(i, x[i], n, order));
  return out;
}

inline JetVec lift_point(std::initializer_list<double> x, int order) {
  return lift_point(std::span<const double>(x.begin(), x.size()), order);
}

/// Chain rule: outer is a jet in m ambient variables (derivatives taken at
/// the ambient point), inner are the m ambient coordinates as jets over some
/// base chart. Returns outer-composed-with-inner over that base chart.
inline Jet compose(const Jet& outer, std::span<const Jet> inner) {
  const int m = outer.dim();
  if (m != static_cast<int>(inner.size()))
    throw DomainError("compose: outer dimension != number of inner jets");
  if (m == 0) throw DomainError("compose: empty inner set");
  const int n = inner[0].dim();
  int ord = outer.order();
  for (const Jet& j : inner) ord = std::min(ord, j.order());

  Jet r = Jet::constant(outer.value(), n, ord);
  if (ord >= 1)
    for (int a = 0; a < n; ++a) {
      double s = 0.0;
      for (int g = 0; g < m; ++g) s += outer.d1(g) * inner[g].d1(a);
      r.d1(a) = s;
    }
  if (ord >= 2)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int g = 0; g < m; ++g) {
          s += outer.d1(g) * inner[g].d2(a, b);
          for (int h = 0; h < m; ++h)
            s += outer.d2(g, h) * inner[g].d1(a) * inner[h].d1(b);
        }
        r.d2(a, b) = s;
      }
  if (ord >= 3)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          double s = 0.0;
          for (int g = 0; g < m; ++g) {
            s += outer.d1(g) * inner[g].d3(a, b, c);
            for (int h = 0; h < m; ++h) {
              s += outer.d2(g, h) * (inner[g].d2(a, b) * inner[h].d1(c) +
                                     inner[g].d2(a, c) * inner[h].d1(b) +
                                     inner[g].d2(b, c) * inner[h].d1(a));
              for (int e = 0; e < m; ++e)
                s += outer.d3(g, h, e) * inner[g].d1(a) * inner[h].d1(b) *
                     inner[e].d1(c);
            }
          }
          r.d3(a, b, c) = s;
        }
  return r;
}

}  // namespace umb
