#pragma once

#include "ach/field.hpp"

#include <vector>

namespace ach {

/// Truncated formal power series in the defining function rho, with
/// FieldValue coefficients. Binary operations truncate at the shorter
/// operand's order.
class JetSeries {
 public:
  JetSeries() : order_(-1) {}
  explicit JetSeries(int order) : order_(order), c_(order + 1) {}
  static JetSeries constant(int order, FieldValue v) {
    JetSeries s(order);
    s.c_[0] = std::move(v);
    return s;
  }
  static JetSeries monomial(int order, int power, FieldValue v) {
    JetSeries s(order);
    if (power <= order) s.c_[power] = std::move(v);
    return s;
  }
  static JetSeries one(int order) { return constant(order, FieldValue::ratio(1)); }

  int order() const { return order_; }
  const FieldValue& at(int k) const { return c_.at(k); }
  void set(int k, FieldValue v) { c_.at(k) = std::move(v); }

  bool is_zero() const {
    for (const auto& c : c_)
      if (!c.is_zero()) return false;
    return true;
  }
  /// Lowest power with a structurally nonzero coefficient; order()+1 if zero.
  int vanishing_order() const {
    for (int k = 0; k <= order_; ++k)
      if (!c_[k].is_zero()) return k;
    return order_ + 1;
  }
  double max_abs() const {
    double m = 0.0;
    for (const auto& c : c_) m = std::max(m, c.max_abs());
    return m;
  }

  JetSeries truncated(int new_order) const {
    if (new_order > order_) throw PreconditionError("cannot extend a truncated series");
    JetSeries s(new_order);
    for (int k = 0; k <= new_order; ++k) s.c_[k] = c_[k];
    return s;
  }
  JetSeries conj() const {
    JetSeries s(order_);
    for (int k = 0; k <= order_; ++k) s.c_[k] = c_[k].conj();
    return s;
  }
  /// rho^p * this, truncated at the same order.
  JetSeries shift_up(int p) const {
    JetSeries s(order_);
    for (int k = p; k <= order_; ++k) s.c_[k] = c_[k - p];
    return s;
  }
  JetSeries scaled(const FieldValue& f) const {
    JetSeries s(order_);
    if (f.is_zero()) return s;
    for (int k = 0; k <= order_; ++k) s.c_[k] = c_[k] * f;
    return s;
  }

  friend JetSeries operator+(const JetSeries& a, const JetSeries& b) {
    int n = std::min(a.order_, b.order_);
    JetSeries s(n);
    for (int k = 0; k <= n; ++k) s.c_[k] = a.c_[k] + b.c_[k];
    return s;
  }
  friend JetSeries operator-(const JetSeries& a, const JetSeries& b) {
    int n = std::min(a.order_, b.order_);
    JetSeries s(n);
    for (int k = 0; k <= n; ++k) s.c_[k] = a.c_[k] - b.c_[k];
    return s;
  }
  friend JetSeries operator-(const JetSeries& a) {
    JetSeries s(a.order_);
    for (int k = 0; k <= a.order_; ++k) s.c_[k] = -a.c_[k];
    return s;
  }
  void operator+=(const JetSeries& b) {
    if (b.order_ < order_) throw PreconditionError("accumulating a shorter series");
    for (int k = 0; k <= order_; ++k) c_[k] = c_[k] + b.c_[k];
  }
  void operator-=(const JetSeries& b) {
    if (b.order_ < order_) throw PreconditionError("accumulating a shorter series");
    for (int k = 0; k <= order_; ++k) c_[k] = c_[k] - b.c_[k];
  }
  /// this += a*b, truncated at this->order().
  void add_mul(const JetSeries& a, const JetSeries& b);

 private:
  int order_;
  std::vector<FieldValue> c_;
};

/// Cauchy product truncated at min(order a, order b).
JetSeries jet_mul(const JetSeries& a, const JetSeries& b);

/// Multiplicative inverse; requires an invertible order-0 coefficient.
JetSeries jet_inverse(const JetSeries& a, double float_tol = 0.0);

/// Square root of a series with real positive leading coefficient, by Newton
/// iteration on the series.
JetSeries jet_sqrt(const JetSeries& a, double float_tol = 0.0);

/// The operator rho d/drho: coefficient k maps to k * coefficient k.
JetSeries radial_derivative(const JetSeries& a);

/// (rho d/drho + c) applied to a, with rational constant c.
JetSeries radial_affine(const JetSeries& a, long c_num, long c_den = 1);

}  // namespace ach
