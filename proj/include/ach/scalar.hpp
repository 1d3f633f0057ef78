#pragma once

#include <gmpxx.h>

#include <complex>
#include <stdexcept>
#include <string>

namespace ach {

enum class Mode { Exact, Float };

struct EngineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ShapeMismatch : EngineError {
  using EngineError::EngineError;
};
struct PreconditionError : EngineError {
  using EngineError::EngineError;
};

/// Complex number with exact rational real and imaginary parts.
struct RatC {
  mpq_class re, im;

  RatC() : re(0), im(0) {}
  RatC(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}
  explicit RatC(long n) : re(n), im(0) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  RatC conj() const { return {re, -im}; }
  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

  friend RatC operator+(const RatC& a, const RatC& b) { return {a.re + b.re, a.im + b.im}; }
  friend RatC operator-(const RatC& a, const RatC& b) { return {a.re - b.re, a.im - b.im}; }
  friend RatC operator-(const RatC& a) { return {-a.re, -a.im}; }
  friend RatC operator*(const RatC& a, const RatC& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const RatC& a, const RatC& b) { return a.re == b.re && a.im == b.im; }

  RatC inverse() const {
    mpq_class n = re * re + im * im;
    if (sgn(n) == 0) throw PreconditionError("inverse of exact zero");
    return {re / n, -im / n};
  }
};

/// Canonicalized rational from an integer pair (q may be negative).
inline mpq_class ratq(long p, long q = 1) {
  mpq_class r(p, q);
  r.canonicalize();
  return r;
}

/// Parse "p/q" or "p" (decimal strings) into an exact rational.
mpq_class parse_rational(const std::string& s);
std::string rational_to_string(const mpq_class& q);

/// Exact square root of a rational; throws unless numerator and denominator
/// are perfect squares.
mpq_class exact_sqrt(const mpq_class& q);

/// One element of the active coefficient field, tagged exact or float.
/// Exact scalars demote to float on contact with a float operand.
class Scalar {
 public:
  Scalar() : mode_(Mode::Exact), x_() {}
  static Scalar exact(RatC v) {
    Scalar s;
    s.mode_ = Mode::Exact;
    s.x_ = std::move(v);
    return s;
  }
  static Scalar exact(mpq_class re, mpq_class im = 0) { return exact(RatC{std::move(re), std::move(im)}); }
  static Scalar flt(std::complex<double> v) {
    Scalar s;
    s.mode_ = Mode::Float;
    s.f_ = v;
    return s;
  }

  Mode mode() const { return mode_; }
  bool is_exact() const { return mode_ == Mode::Exact; }
  const RatC& rat() const { return x_; }
  std::complex<double> to_complex() const { return is_exact() ? x_.to_complex() : f_; }
  bool is_zero() const { return is_exact() ? x_.is_zero() : (f_ == std::complex<double>(0.0, 0.0)); }
  double abs() const { return std::abs(to_complex()); }

  Scalar conj() const { return is_exact() ? exact(x_.conj()) : flt(std::conj(f_)); }
  Scalar inverse() const {
    if (is_exact()) return exact(x_.inverse());
    if (f_ == std::complex<double>(0.0, 0.0)) throw PreconditionError("inverse of float zero");
    return flt(1.0 / f_);
  }
  /// Square root of a real positive scalar.
  Scalar sqrt_positive() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return exact(a.x_ + b.x_);
    return flt(a.to_complex() + b.to_complex());
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return exact(a.x_ - b.x_);
    return flt(a.to_complex() - b.to_complex());
  }
  friend Scalar operator-(const Scalar& a) { return a.is_exact() ? exact(-a.x_) : flt(-a.f_); }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return exact(a.x_ * b.x_);
    return flt(a.to_complex() * b.to_complex());
  }
  /// Exact equality in exact mode; use approx_eq for float comparisons.
  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return a.x_ == b.x_;
    return a.to_complex() == b.to_complex();
  }
  bool approx_eq(const Scalar& b, double tol) const { return std::abs(to_complex() - b.to_complex()) <= tol; }

 private:
  Mode mode_;
  RatC x_;
  std::complex<double> f_{0.0, 0.0};
};

}  // namespace ach
