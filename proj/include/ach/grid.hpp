#pragma once

#include <array>
#include <complex>
#include <memory>
#include <vector>

namespace ach {

using cplx = std::complex<double>;

struct GridDims {
  std::array<int, 3> n{1, 1, 1};
  std::array<double, 3> period{1.0, 1.0, 1.0};

  std::size_t size() const { return std::size_t(n[0]) * n[1] * n[2]; }
  friend bool operator==(const GridDims& a, const GridDims& b) {
    return a.n == b.n && a.period == b.period;
  }
};

/// Samples of a complex scalar field at uniform periodic nodes, row-major
/// with axis 0 slowest. Immutable once built; shared by value holders.
struct GridData {
  GridDims dims;
  std::vector<cplx> v;

  explicit GridData(GridDims d) : dims(d), v(d.size(), cplx{0.0, 0.0}) {}
  GridData(GridDims d, std::vector<cplx> data) : dims(d), v(std::move(data)) {}
};

using GridPtr = std::shared_ptr<const GridData>;

// Data-parallel pointwise kernels. The default implementations use OpenMP;
// the serial reference versions in kern::serial are kept for testing and
// benchmarking, selected at runtime through kern::serial_mode().
namespace kern {

bool& serial_mode();

void add(cplx* out, const cplx* a, const cplx* b, std::size_t n);
void sub(cplx* out, const cplx* a, const cplx* b, std::size_t n);
void mul(cplx* out, const cplx* a, const cplx* b, std::size_t n);
void mul_add(cplx* out, const cplx* a, const cplx* b, std::size_t n);  // out += a*b
void scale(cplx* out, const cplx* a, cplx c, std::size_t n);
void scale_add(cplx* out, const cplx* a, cplx c, std::size_t n);  // out += c*a
void conj(cplx* out, const cplx* a, std::size_t n);
void neg(cplx* out, const cplx* a, std::size_t n);
double max_abs(const cplx* a, std::size_t n);
/// out = d/dx_axis applied with the dense spectral differentiation matrix
/// dmat (n_axis x n_axis, row-major).
void deriv_axis(cplx* out, const cplx* in, const GridDims& dims, int axis, const double* dmat);

namespace serial {
void add(cplx* out, const cplx* a, const cplx* b, std::size_t n);
void sub(cplx* out, const cplx* a, const cplx* b, std::size_t n);
void mul(cplx* out, const cplx* a, const cplx* b, std::size_t n);
void mul_add(cplx* out, const cplx* a, const cplx* b, std::size_t n);
void scale(cplx* out, const cplx* a, cplx c, std::size_t n);
void scale_add(cplx* out, const cplx* a, cplx c, std::size_t n);
void conj(cplx* out, const cplx* a, std::size_t n);
void neg(cplx* out, const cplx* a, std::size_t n);
double max_abs(const cplx* a, std::size_t n);
void deriv_axis(cplx* out, const cplx* in, const GridDims& dims, int axis, const double* dmat);
}  // namespace serial

}  // namespace kern

/// Dense spectral differentiation matrix for n uniform nodes over the given
/// period (trigonometric interpolation derivative; Nyquist mode dropped for
/// even n).
std::vector<double> spectral_derivative_matrix(int n, double period);

/// Cached per-chart geometry: dims plus one differentiation matrix per axis.
struct SpectralGeometry {
  GridDims dims;
  std::array<std::vector<double>, 3> dmat;

  explicit SpectralGeometry(GridDims d) : dims(d) {
    for (int a = 0; a < 3; ++a) dmat[a] = spectral_derivative_matrix(d.n[a], d.period[a]);
  }
};

using GeometryPtr = std::shared_ptr<const SpectralGeometry>;

}  // namespace ach
