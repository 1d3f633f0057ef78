#include "ach/jet.hpp"

#include <cmath>

namespace ach {

void JetSeries::add_mul(const JetSeries& a, const JetSeries& b) {
  if (a.order_ < order_ || b.order_ < order_) throw PreconditionError("accumulating shorter series");
  for (int k = 0; k <= order_; ++k) {
    FieldValue acc = c_[k];
    for (int j = 0; j <= k; ++j) {
      if (a.c_[j].is_zero() || b.c_[k - j].is_zero()) continue;
      acc = acc + a.c_[j] * b.c_[k - j];
    }
    c_[k] = std::move(acc);
  }
}

JetSeries jet_mul(const JetSeries& a, const JetSeries& b) {
  JetSeries s(std::min(a.order(), b.order()));
  s.add_mul(a, b);
  return s;
}

JetSeries jet_inverse(const JetSeries& a, double float_tol) {
  const int n = a.order();
  JetSeries b(n);
  FieldValue lead = a.at(0).inverse(float_tol);
  b.set(0, lead);
  for (int k = 1; k <= n; ++k) {
    FieldValue acc = FieldValue::zero();
    for (int j = 1; j <= k; ++j) {
      if (a.at(j).is_zero() || b.at(k - j).is_zero()) continue;
      acc = acc + a.at(j) * b.at(k - j);
    }
    b.set(k, -(lead * acc));
  }
  return b;
}

JetSeries jet_sqrt(const JetSeries& a, double float_tol) {
  const int n = a.order();
  FieldValue root = a.at(0).sqrt_positive(float_tol);
  JetSeries x = JetSeries::constant(n, root);
  if (n == 0) return x;
  int iters = 1;
  while ((1 << iters) < n + 1) ++iters;
  ++iters;
  const FieldValue half = FieldValue::ratio(1, 2);
  for (int i = 0; i < iters; ++i) x = (x + jet_mul(a, jet_inverse(x, float_tol))).scaled(half);
  return x;
}

JetSeries radial_derivative(const JetSeries& a) {
  JetSeries s(a.order());
  for (int k = 1; k <= a.order(); ++k) s.set(k, a.at(k) * FieldValue::ratio(k));
  return s;
}

JetSeries radial_affine(const JetSeries& a, long c_num, long c_den) {
  JetSeries s(a.order());
  for (int k = 0; k <= a.order(); ++k)
    s.set(k, a.at(k) * FieldValue::constant(Scalar::exact(ratq(c_num, c_den) + k)));
  return s;
}

}  // namespace ach
