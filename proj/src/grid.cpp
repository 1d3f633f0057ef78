#include "ach/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace ach {

namespace kern {

namespace serial {

void add(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}
void sub(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}
void mul(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}
void mul_add(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] += a[i] * b[i];
}
void scale(cplx* out, const cplx* a, cplx c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = c * a[i];
}
void scale_add(cplx* out, const cplx* a, cplx c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] += c * a[i];
}
void conj(cplx* out, const cplx* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::conj(a[i]);
}
void neg(cplx* out, const cplx* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = -a[i];
}
double max_abs(const cplx* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

void deriv_axis(cplx* out, const cplx* in, const GridDims& dims, int axis, const double* dmat) {
  const int n0 = dims.n[0], n1 = dims.n[1], n2 = dims.n[2];
  const int na = dims.n[axis];
  auto at = [&](int i, int j, int k) -> std::size_t { return (std::size_t(i) * n1 + j) * n2 + k; };
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j)
      for (int k = 0; k < n2; ++k) {
        cplx acc{0.0, 0.0};
        int idx = axis == 0 ? i : (axis == 1 ? j : k);
        const double* row = dmat + std::size_t(idx) * na;
        for (int m = 0; m < na; ++m) {
          std::size_t src = axis == 0 ? at(m, j, k) : (axis == 1 ? at(i, m, k) : at(i, j, m));
          acc += row[m] * in[src];
        }
        out[at(i, j, k)] = acc;
      }
}

}  // namespace serial

bool& serial_mode() {
  static bool flag = false;
  return flag;
}

// Below the threshold the OpenMP fork/join overhead dominates; stay serial.
static constexpr std::size_t kParThreshold = 8192;

#define ACH_POINTWISE(name, expr)                                        \
  void name(cplx* out, const cplx* a, const cplx* b, std::size_t n) {   \
    if (serial_mode() || n < kParThreshold) {                           \
      serial::name(out, a, b, n);                                       \
      return;                                                           \
    }                                                                   \
    _Pragma("omp parallel for") for (std::int64_t i = 0;                \
                                     i < std::int64_t(n); ++i) expr;    \
  }

ACH_POINTWISE(add, { out[i] = a[i] + b[i]; })
ACH_POINTWISE(sub, { out[i] = a[i] - b[i]; })
ACH_POINTWISE(mul, { out[i] = a[i] * b[i]; })
ACH_POINTWISE(mul_add, { out[i] += a[i] * b[i]; })
#undef ACH_POINTWISE

void scale(cplx* out, const cplx* a, cplx c, std::size_t n) {
  if (serial_mode() || n < kParThreshold) return serial::scale(out, a, c, n);
#pragma omp parallel for
  for (std::int64_t i = 0; i < std::int64_t(n); ++i) out[i] = c * a[i];
}
void scale_add(cplx* out, const cplx* a, cplx c, std::size_t n) {
  if (serial_mode() || n < kParThreshold) return serial::scale_add(out, a, c, n);
#pragma omp parallel for
  for (std::int64_t i = 0; i < std::int64_t(n); ++i) out[i] += c * a[i];
}
void conj(cplx* out, const cplx* a, std::size_t n) {
  if (serial_mode() || n < kParThreshold) return serial::conj(out, a, n);
#pragma omp parallel for
  for (std::int64_t i = 0; i < std::int64_t(n); ++i) out[i] = std::conj(a[i]);
}
void neg(cplx* out, const cplx* a, std::size_t n) {
  if (serial_mode() || n < kParThreshold) return serial::neg(out, a, n);
#pragma omp parallel for
  for (std::int64_t i = 0; i < std::int64_t(n); ++i) out[i] = -a[i];
}
double max_abs(const cplx* a, std::size_t n) {
  if (serial_mode() || n < kParThreshold) return serial::max_abs(a, n);
  double m = 0.0;
#pragma omp parallel for reduction(max : m)
  for (std::int64_t i = 0; i < std::int64_t(n); ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

void deriv_axis(cplx* out, const cplx* in, const GridDims& dims, int axis, const double* dmat) {
  if (serial_mode() || dims.size() < kParThreshold) return serial::deriv_axis(out, in, dims, axis, dmat);
  const int n0 = dims.n[0], n1 = dims.n[1], n2 = dims.n[2];
  const int na = dims.n[axis];
  auto at = [&](int i, int j, int k) -> std::size_t { return (std::size_t(i) * n1 + j) * n2 + k; };
#pragma omp parallel for collapse(2)
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j)
      for (int k = 0; k < n2; ++k) {
        cplx acc{0.0, 0.0};
        int idx = axis == 0 ? i : (axis == 1 ? j : k);
        const double* row = dmat + std::size_t(idx) * na;
        for (int m = 0; m < na; ++m) {
          std::size_t src = axis == 0 ? at(m, j, k) : (axis == 1 ? at(i, m, k) : at(i, j, m));
          acc += row[m] * in[src];
        }
        out[at(i, j, k)] = acc;
      }
}

}  // namespace kern

std::vector<double> spectral_derivative_matrix(int n, double period) {
  std::vector<double> d(std::size_t(n) * n, 0.0);
  const double scale = 2.0 * M_PI / period;
  // Closed form of the trigonometric interpolation derivative (the Nyquist
  // mode of an even grid carries no derivative weight). Each diagonal entry
  // is set to minus its row sum so that constants are annihilated exactly;
  // otherwise the residue seeds noise that repeated differentiation in the
  // curvature stack amplifies.
  for (int j = 0; j < n; ++j) {
    double row = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      int r = j - k;
      double sign = (r % 2 == 0) ? 1.0 : -1.0;
      double angle = M_PI * double(r) / double(n);
      double entry = n % 2 == 0 ? 0.5 * sign / std::tan(angle) : 0.5 * sign / std::sin(angle);
      entry *= scale;
      d[std::size_t(j) * n + k] = entry;
      row += entry;
    }
    d[std::size_t(j) * n + j] = -row;
  }
  return d;
}

}  // namespace ach
