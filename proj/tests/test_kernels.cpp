#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ach/grid.hpp"

#include <cmath>
#include <random>

using namespace ach;

namespace {

GridDims dims3(int n) {
  GridDims d;
  d.n = {n, n, n};
  d.period = {2 * M_PI, 2 * M_PI, 2 * M_PI};
  return d;
}

std::vector<cplx> make_cdata(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& z : v) z = {u(rng), u(rng)};
  return v;
}

}  // namespace

TEST_CASE("parallel kernels agree bitwise with the serial reference") {
  GridDims d = dims3(24);  // above the parallel threshold
  std::size_t n = d.size();
  auto a = make_cdata(n, 1), b = make_cdata(n, 2);
  SpectralGeometry geom(d);

  std::vector<cplx> out_par(n), out_ser(n);
  auto compare = [&](auto par, auto ser) {
    kern::serial_mode() = false;
    par(out_par.data());
    ser(out_ser.data());
    CHECK(out_par == out_ser);
  };
  compare([&](cplx* o) { kern::add(o, a.data(), b.data(), n); },
          [&](cplx* o) { kern::serial::add(o, a.data(), b.data(), n); });
  compare([&](cplx* o) { kern::sub(o, a.data(), b.data(), n); },
          [&](cplx* o) { kern::serial::sub(o, a.data(), b.data(), n); });
  compare([&](cplx* o) { kern::mul(o, a.data(), b.data(), n); },
          [&](cplx* o) { kern::serial::mul(o, a.data(), b.data(), n); });
  compare([&](cplx* o) { kern::scale(o, a.data(), {0.5, -2.0}, n); },
          [&](cplx* o) { kern::serial::scale(o, a.data(), {0.5, -2.0}, n); });
  compare([&](cplx* o) { kern::conj(o, a.data(), n); },
          [&](cplx* o) { kern::serial::conj(o, a.data(), n); });
  for (int axis = 0; axis < 3; ++axis)
    compare([&](cplx* o) { kern::deriv_axis(o, a.data(), d, axis, geom.dmat[axis].data()); },
            [&](cplx* o) { kern::serial::deriv_axis(o, a.data(), d, axis, geom.dmat[axis].data()); });
  CHECK(kern::max_abs(a.data(), n) == kern::serial::max_abs(a.data(), n));

  std::vector<cplx> acc_par = make_cdata(n, 3), acc_ser = acc_par;
  kern::mul_add(acc_par.data(), a.data(), b.data(), n);
  kern::serial::mul_add(acc_ser.data(), a.data(), b.data(), n);
  CHECK(acc_par == acc_ser);
}

TEST_CASE("spectral derivative is exact on resolved trigonometric data") {
  GridDims d = dims3(16);
  SpectralGeometry geom(d);
  GridData f(d), expect(d);
  std::size_t idx = 0;
  for (int i = 0; i < d.n[0]; ++i)
    for (int j = 0; j < d.n[1]; ++j)
      for (int k = 0; k < d.n[2]; ++k, ++idx) {
        double x = 2 * M_PI * i / d.n[0], y = 2 * M_PI * j / d.n[1], t = 2 * M_PI * k / d.n[2];
        f.v[idx] = {std::cos(3 * x) * std::sin(y), std::sin(2 * t)};
        expect.v[idx] = {-3 * std::sin(3 * x) * std::sin(y), 0.0};
      }
  GridData out(d);
  kern::deriv_axis(out.v.data(), f.v.data(), d, 0, geom.dmat[0].data());
  double err = 0;
  for (std::size_t i = 0; i < d.size(); ++i) err = std::max(err, std::abs(out.v[i] - expect.v[i]));
  CHECK(err < 1e-12);
}

TEST_CASE("doubling the resolution improves accuracy on analytic data by far more than 10x") {
  auto residual = [&](int n) {
    GridDims d = dims3(n);
    SpectralGeometry geom(d);
    GridData f(d), expect(d);
    std::size_t idx = 0;
    for (int i = 0; i < d.n[0]; ++i)
      for (int j = 0; j < d.n[1]; ++j)
        for (int k = 0; k < d.n[2]; ++k, ++idx) {
          double x = 2 * M_PI * i / d.n[0];
          (void)j;
          (void)k;
          f.v[idx] = {std::exp(std::sin(x)), 0.0};
          expect.v[idx] = {std::cos(x) * std::exp(std::sin(x)), 0.0};
        }
    GridData out(d);
    kern::deriv_axis(out.v.data(), f.v.data(), d, 0, geom.dmat[0].data());
    double err = 0;
    for (std::size_t i = 0; i < d.size(); ++i) err = std::max(err, std::abs(out.v[i] - expect.v[i]));
    return err;
  };
  double e8 = residual(8), e16 = residual(16);
  CHECK(e16 * 10 < e8);
}

TEST_CASE("derivative matrix annihilates constants and differentiates the Nyquist-free band") {
  for (int n : {8, 9, 16}) {
    auto dm = spectral_derivative_matrix(n, 2 * M_PI);
    for (int j = 0; j < n; ++j) {
      double row = 0;
      for (int k = 0; k < n; ++k) row += dm[std::size_t(j) * n + k];
      CHECK(std::abs(row) < 1e-12);
    }
  }
}
