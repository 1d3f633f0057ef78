#pragma once

#include "ach/grid.hpp"
#include "ach/scalar.hpp"

namespace ach {

/// A complex scalar field on the boundary 3-manifold: either a constant
/// (exact or float) or a periodic grid of samples. Constants broadcast
/// against grids; grid/grid operations require identical dimensions.
/// A structural zero is kept as its own state so that series arithmetic can
/// skip vanishing terms cheaply in both modes.
class FieldValue {
 public:
  enum class Kind { Zero, Const, Grid };

  FieldValue() : kind_(Kind::Zero) {}

  static FieldValue zero() { return FieldValue(); }
  static FieldValue constant(Scalar s) {
    if (s.is_zero()) return zero();
    FieldValue f;
    f.kind_ = Kind::Const;
    f.s_ = std::move(s);
    return f;
  }
  static FieldValue ratio(long p, long q = 1) { return constant(Scalar::exact(ratq(p, q))); }
  /// i * (p/q)
  static FieldValue imag_ratio(long p, long q = 1) {
    return constant(Scalar::exact(mpq_class(0), ratq(p, q)));
  }
  static FieldValue flt(cplx v) { return constant(Scalar::flt(v)); }
  static FieldValue grid(GridPtr g);

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  bool is_grid() const { return kind_ == Kind::Grid; }
  bool is_const() const { return kind_ != Kind::Grid; }
  bool is_exact() const { return kind_ == Kind::Zero || (kind_ == Kind::Const && s_.is_exact()); }

  const Scalar& scalar() const;   // Const only
  const GridPtr& grid_ptr() const;  // Grid only
  const GridDims& dims() const;     // Grid only

  /// Constant value as complex (Zero/Const only).
  cplx to_complex() const;
  /// Value at a node; constants broadcast.
  cplx sample(std::size_t i) const;

  FieldValue conj() const;
  FieldValue inverse(double float_tol) const;
  FieldValue sqrt_positive(double float_tol) const;
  FieldValue real_part() const;

  double max_abs() const;
  double max_abs_imag() const;

  friend FieldValue operator+(const FieldValue& a, const FieldValue& b);
  friend FieldValue operator-(const FieldValue& a, const FieldValue& b);
  friend FieldValue operator*(const FieldValue& a, const FieldValue& b);
  friend FieldValue operator-(const FieldValue& a);

  /// Exact structural equality (exact mode); for float data compare
  /// max_abs(a-b) against a tolerance instead.
  bool exact_eq(const FieldValue& b) const;

 private:
  Kind kind_;
  Scalar s_;
  GridPtr g_;
};

}  // namespace ach
