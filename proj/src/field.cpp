#include "ach/field.hpp"

#include <cmath>

namespace ach {

FieldValue FieldValue::grid(GridPtr g) {
  if (!g) throw PreconditionError("null grid");
  FieldValue f;
  f.kind_ = Kind::Grid;
  f.g_ = std::move(g);
  return f;
}

const Scalar& FieldValue::scalar() const {
  static const Scalar zero_scalar = Scalar::exact(mpq_class(0));
  if (kind_ == Kind::Zero) return zero_scalar;
  if (kind_ != Kind::Const) throw PreconditionError("FieldValue is not a constant");
  return s_;
}

const GridPtr& FieldValue::grid_ptr() const {
  if (kind_ != Kind::Grid) throw PreconditionError("FieldValue is not a grid");
  return g_;
}

const GridDims& FieldValue::dims() const { return grid_ptr()->dims; }

cplx FieldValue::to_complex() const {
  if (kind_ == Kind::Zero) return {0.0, 0.0};
  if (kind_ == Kind::Const) return s_.to_complex();
  throw PreconditionError("grid field has no single value");
}

cplx FieldValue::sample(std::size_t i) const {
  if (kind_ == Kind::Grid) return g_->v[i];
  return to_complex();
}

static GridDims common_dims(const FieldValue& a, const FieldValue& b) {
  if (a.is_grid() && b.is_grid()) {
    if (!(a.dims() == b.dims())) throw ShapeMismatch("grid dimensions differ");
    return a.dims();
  }
  return a.is_grid() ? a.dims() : b.dims();
}

FieldValue operator+(const FieldValue& a, const FieldValue& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_const() && b.is_const()) return FieldValue::constant(a.scalar() + b.scalar());
  GridDims d = common_dims(a, b);
  auto out = std::make_shared<GridData>(d);
  if (a.is_grid() && b.is_grid())
    kern::add(out->v.data(), a.grid_ptr()->v.data(), b.grid_ptr()->v.data(), d.size());
  else {
    const FieldValue& g = a.is_grid() ? a : b;
    cplx c = (a.is_grid() ? b : a).to_complex();
    for (std::size_t i = 0; i < d.size(); ++i) out->v[i] = g.grid_ptr()->v[i] + c;
  }
  return FieldValue::grid(out);
}

FieldValue operator-(const FieldValue& a) {
  if (a.is_zero()) return a;
  if (a.is_const()) return FieldValue::constant(-a.scalar());
  auto out = std::make_shared<GridData>(a.dims());
  kern::neg(out->v.data(), a.grid_ptr()->v.data(), a.dims().size());
  return FieldValue::grid(out);
}

FieldValue operator-(const FieldValue& a, const FieldValue& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  if (a.is_const() && b.is_const()) return FieldValue::constant(a.scalar() - b.scalar());
  GridDims d = common_dims(a, b);
  auto out = std::make_shared<GridData>(d);
  if (a.is_grid() && b.is_grid())
    kern::sub(out->v.data(), a.grid_ptr()->v.data(), b.grid_ptr()->v.data(), d.size());
  else if (a.is_grid()) {
    cplx c = b.to_complex();
    for (std::size_t i = 0; i < d.size(); ++i) out->v[i] = a.grid_ptr()->v[i] - c;
  } else {
    cplx c = a.to_complex();
    for (std::size_t i = 0; i < d.size(); ++i) out->v[i] = c - b.grid_ptr()->v[i];
  }
  return FieldValue::grid(out);
}

FieldValue operator*(const FieldValue& a, const FieldValue& b) {
  if (a.is_zero() || b.is_zero()) return FieldValue::zero();
  if (a.is_const() && b.is_const()) return FieldValue::constant(a.scalar() * b.scalar());
  GridDims d = common_dims(a, b);
  auto out = std::make_shared<GridData>(d);
  if (a.is_grid() && b.is_grid())
    kern::mul(out->v.data(), a.grid_ptr()->v.data(), b.grid_ptr()->v.data(), d.size());
  else {
    const FieldValue& g = a.is_grid() ? a : b;
    cplx c = (a.is_grid() ? b : a).to_complex();
    kern::scale(out->v.data(), g.grid_ptr()->v.data(), c, d.size());
  }
  return FieldValue::grid(out);
}

FieldValue FieldValue::conj() const {
  if (kind_ == Kind::Zero) return *this;
  if (kind_ == Kind::Const) return constant(s_.conj());
  auto out = std::make_shared<GridData>(dims());
  kern::conj(out->v.data(), g_->v.data(), dims().size());
  return grid(out);
}

FieldValue FieldValue::inverse(double float_tol) const {
  if (kind_ == Kind::Zero) throw PreconditionError("inverse of zero field");
  if (kind_ == Kind::Const) return constant(s_.inverse());
  auto out = std::make_shared<GridData>(dims());
  for (std::size_t i = 0; i < dims().size(); ++i) {
    cplx z = g_->v[i];
    if (std::abs(z) <= float_tol) throw PreconditionError("grid field not invertible at a node");
    out->v[i] = 1.0 / z;
  }
  return grid(out);
}

FieldValue FieldValue::sqrt_positive(double float_tol) const {
  if (kind_ == Kind::Zero) throw PreconditionError("sqrt of zero leading coefficient");
  if (kind_ == Kind::Const) return constant(s_.sqrt_positive());
  auto out = std::make_shared<GridData>(dims());
  for (std::size_t i = 0; i < dims().size(); ++i) {
    cplx z = g_->v[i];
    if (std::abs(z.imag()) > float_tol || z.real() <= float_tol)
      throw PreconditionError("sqrt requires a real positive field");
    out->v[i] = std::sqrt(z.real());
  }
  return grid(out);
}

FieldValue FieldValue::real_part() const {
  if (kind_ == Kind::Zero) return *this;
  if (kind_ == Kind::Const) {
    if (s_.is_exact()) return constant(Scalar::exact(s_.rat().re, 0));
    return constant(Scalar::flt({s_.to_complex().real(), 0.0}));
  }
  auto out = std::make_shared<GridData>(dims());
  for (std::size_t i = 0; i < dims().size(); ++i) out->v[i] = {g_->v[i].real(), 0.0};
  return grid(out);
}

double FieldValue::max_abs() const {
  if (kind_ == Kind::Zero) return 0.0;
  if (kind_ == Kind::Const) return s_.abs();
  return kern::max_abs(g_->v.data(), dims().size());
}

double FieldValue::max_abs_imag() const {
  if (kind_ == Kind::Zero) return 0.0;
  if (kind_ == Kind::Const) return std::abs(s_.to_complex().imag());
  double m = 0.0;
  for (const auto& z : g_->v) m = std::max(m, std::abs(z.imag()));
  return m;
}

bool FieldValue::exact_eq(const FieldValue& b) const {
  if (kind_ == Kind::Zero || b.kind_ == Kind::Zero) {
    const FieldValue& other = kind_ == Kind::Zero ? b : *this;
    if (other.kind_ == Kind::Zero) return true;
    if (other.kind_ == Kind::Const) return other.s_.is_zero();
    return other.max_abs() == 0.0;
  }
  if (kind_ == Kind::Const && b.kind_ == Kind::Const) return s_ == b.s_;
  if (kind_ == Kind::Grid && b.kind_ == Kind::Grid) {
    if (!(dims() == b.dims())) return false;
    return g_->v == b.g_->v;
  }
  return false;
}

}  // namespace ach
