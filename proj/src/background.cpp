#include "ach/background.hpp"

#include "ach/hash.hpp"

#include <cmath>
#include <sstream>

namespace ach {

namespace {

FieldValue to_grid(const FieldValue& f, const GridDims& dims) {
  if (f.is_grid()) {
    if (!(f.dims() == dims)) throw ShapeMismatch("chart component has wrong resolution");
    return f;
  }
  auto g = std::make_shared<GridData>(dims);
  cplx c = f.to_complex();
  for (auto& z : g->v) z = c;
  return FieldValue::grid(g);
}

FieldValue partial(const GeometryPtr& geom, const FieldValue& f, int axis) {
  if (!f.is_grid()) return FieldValue::zero();
  auto out = std::make_shared<GridData>(geom->dims);
  kern::deriv_axis(out->v.data(), f.grid_ptr()->v.data(), geom->dims, axis, geom->dmat[axis].data());
  return FieldValue::grid(out);
}

// 2-form evaluation on a pair of frame vectors from coordinate components
// c[i][j] (i<j used), u, v.
FieldValue eval_two_form(const std::array<std::array<FieldValue, 3>, 3>& c,
                         const std::array<FieldValue, 3>& u, const std::array<FieldValue, 3>& v) {
  FieldValue acc = FieldValue::zero();
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      acc = acc + c[i][j] * (u[i] * v[j] - u[j] * v[i]);
  return acc;
}

std::array<FieldValue, 3> conj3(const std::array<FieldValue, 3>& a) {
  return {a[0].conj(), a[1].conj(), a[2].conj()};
}

}  // namespace

Background Background::heisenberg(Mode mode) {
  return constant_background(Scalar::exact(mpq_class(0)), Scalar::exact(mpq_class(0)), mode);
}

Background Background::constant_background(Scalar s, Scalar a, Mode mode) {
  Background bg;
  bg.kind = Kind::Constant;
  bg.mode = mode;
  if (mode == Mode::Float) {
    s = Scalar::flt(s.to_complex());
    a = Scalar::flt(a.to_complex());
  } else if (!s.is_exact() || !a.is_exact()) {
    throw PreconditionError("exact background requires exact constants");
  }
  if (s.is_exact() && sgn(s.rat().im) != 0) throw PreconditionError("Scal must be real");
  bg.scal = FieldValue::constant(s);
  bg.a11 = FieldValue::constant(a);
  // Invariant-frame connection: omega_1^1 = -i Scal theta, omega(Z_1) = 0.
  bg.omega0 = FieldValue::imag_ratio(-1) * bg.scal;
  bg.omega1 = FieldValue::zero();
  std::ostringstream os;
  if (s.is_exact())
    os << "{\"kind\":\"constant\",\"mode\":\"exact\",\"scal\":\"" << rational_to_string(s.rat().re)
       << "\",\"a11\":[\"" << rational_to_string(a.rat().re) << "\",\"" << rational_to_string(a.rat().im)
       << "\"]}";
  else
    os << "{\"kind\":\"constant\",\"mode\":\"float\",\"scal\":" << s.to_complex().real() << ",\"a11\":["
       << a.to_complex().real() << "," << a.to_complex().imag() << "]}";
  bg.spec_json = os.str();
  return bg;
}

Background Background::from_jet_table(const JetTable& table, Mode mode) {
  return constant_background(table.scal, table.a11, mode);
}

Background Background::flat_grid(std::array<int, 3> n) {
  Background bg;
  bg.kind = Kind::Grid;
  bg.mode = Mode::Float;
  bg.declared_flat_model = true;
  GridDims dims;
  dims.n = n;
  dims.period = {2.0 * M_PI, 2.0 * M_PI, 2.0 * M_PI};
  bg.geom = std::make_shared<SpectralGeometry>(dims);
  const double r = 1.0 / std::sqrt(2.0);
  bg.frame_T = {FieldValue::zero(), FieldValue::zero(), FieldValue::flt({1.0, 0.0})};
  bg.frame_Z1 = {FieldValue::flt({r, 0.0}), FieldValue::flt({0.0, -r}), FieldValue::zero()};
  bg.coframe_th = {FieldValue::zero(), FieldValue::zero(), FieldValue::flt({1.0, 0.0})};
  bg.coframe_th1 = {FieldValue::flt({r, 0.0}), FieldValue::flt({0.0, r}), FieldValue::zero()};
  bg.scal = FieldValue::zero();
  bg.a11 = FieldValue::zero();
  bg.omega0 = FieldValue::zero();
  bg.omega1 = FieldValue::zero();
  bg.volume = FieldValue::flt({1.0, 0.0});
  std::ostringstream os;
  os << "{\"kind\":\"flat-grid\",\"resolution\":[" << n[0] << "," << n[1] << "," << n[2] << "]}";
  bg.spec_json = os.str();
  return bg;
}

Background Background::from_chart(const ChartSpec& spec, double tol, double residual_gate) {
  Background bg;
  bg.kind = Kind::Grid;
  bg.mode = Mode::Float;
  bg.geom = std::make_shared<SpectralGeometry>(spec.dims);
  const GridDims& dims = spec.dims;
  const std::size_t sz = dims.size();

  std::array<FieldValue, 3> th, z;
  for (int i = 0; i < 3; ++i) {
    th[i] = to_grid(spec.theta[i], dims);
    z[i] = to_grid(spec.z[i], dims);
  }

  // theta must be real and annihilate Z.
  for (int i = 0; i < 3; ++i)
    if (th[i].max_abs_imag() > tol) throw PreconditionError("contact form must be real");
  {
    FieldValue thz = th[0] * z[0] + th[1] * z[1] + th[2] * z[2];
    if (thz.max_abs() > tol * 100) throw PreconditionError("theta(Z) != 0 on the chart");
  }

  std::array<std::array<FieldValue, 3>, 3> dth;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) dth[i][j] = partial(bg.geom, th[j], i) - partial(bg.geom, th[i], j);

  // Contact condition and orientation: theta ^ dtheta > 0 nodewise.
  FieldValue w = th[0] * dth[1][2] - th[1] * dth[0][2] + th[2] * dth[0][1];
  for (std::size_t i = 0; i < sz; ++i) {
    cplx v = w.sample(i);
    if (std::abs(v.imag()) > tol || v.real() <= tol)
      throw PreconditionError("contact condition fails at a grid node");
  }
  bg.volume = w.real_part();

  // Levi form of the given generator; rescale to a unitary frame.
  FieldValue h = FieldValue::imag_ratio(-1) * eval_two_form(dth, z, conj3(z));
  for (std::size_t i = 0; i < sz; ++i) {
    cplx v = h.sample(i);
    if (std::abs(v.imag()) > 100 * tol || v.real() <= tol)
      throw PreconditionError("strict pseudoconvexity fails at a grid node");
  }
  FieldValue hs = h.real_part().sqrt_positive(tol).inverse(tol);
  for (int i = 0; i < 3; ++i) bg.frame_Z1[i] = z[i] * hs;

  // Reeb field from the kernel of dtheta.
  {
    std::array<FieldValue, 3> v{dth[1][2], -dth[0][2], dth[0][1]};
    FieldValue winv = w.inverse(tol);
    for (int i = 0; i < 3; ++i) bg.frame_T[i] = (v[i] * winv).real_part();
  }
  bg.coframe_th = th;

  // Dual coframe row for Z_1 by pointwise inversion of the frame matrix.
  {
    auto t1 = std::make_shared<GridData>(dims);
    auto t2 = std::make_shared<GridData>(dims);
    auto t3 = std::make_shared<GridData>(dims);
    for (std::size_t i = 0; i < sz; ++i) {
      cplx m[3][3];
      for (int r = 0; r < 3; ++r) {
        m[r][0] = bg.frame_T[r].sample(i);
        m[r][1] = bg.frame_Z1[r].sample(i);
        m[r][2] = std::conj(bg.frame_Z1[r].sample(i));
      }
      cplx det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                 m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                 m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
      if (std::abs(det) <= tol) throw PreconditionError("degenerate frame at a grid node");
      // Row 1 of the inverse (the theta^1 coframe components).
      t1->v[i] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
      t2->v[i] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
      t3->v[i] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    }
    bg.coframe_th1 = {FieldValue::grid(t1), FieldValue::grid(t2), FieldValue::grid(t3)};
  }

  // Structure equation for d theta^1: solve for the connection form and the
  // torsion under the metric-compatibility constraint.
  std::array<std::array<FieldValue, 3>, 3> dth1;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      dth1[i][j] = partial(bg.geom, bg.coframe_th1[j], i) - partial(bg.geom, bg.coframe_th1[i], j);
  std::array<FieldValue, 3> zbar = conj3(bg.frame_Z1);
  FieldValue p = eval_two_form(dth1, bg.frame_T, bg.frame_Z1);
  FieldValue q = eval_two_form(dth1, bg.frame_T, zbar);
  FieldValue r = eval_two_form(dth1, bg.frame_Z1, zbar);

  bg.omega0 = (p.conj() - p) * FieldValue::ratio(1, 2);  // imaginary part of -p
  bg.omega1 = -(r.conj());
  bg.a11 = q.conj();

  // Curvature scalar from d omega evaluated on (Z_1, Z_1bar).
  {
    std::array<FieldValue, 3> om;
    FieldValue om_bar = -(bg.omega1.conj());
    for (int i = 0; i < 3; ++i)
      om[i] = bg.omega0 * th[i] + bg.omega1 * bg.coframe_th1[i] + om_bar * bg.coframe_th1[i].conj();
    std::array<std::array<FieldValue, 3>, 3> dom;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) dom[i][j] = partial(bg.geom, om[j], i) - partial(bg.geom, om[i], j);
    bg.scal = eval_two_form(dom, bg.frame_Z1, zbar).real_part();
  }

  {
    std::uint64_t hash = 0;
    for (int i = 0; i < 3; ++i) {
      hash = fnv1a64(th[i].grid_ptr()->v.data(), sz * sizeof(cplx), hash ? hash : 1469598103934665603ull);
      hash = fnv1a64(z[i].grid_ptr()->v.data(), sz * sizeof(cplx), hash);
    }
    std::ostringstream os;
    os << "{\"kind\":\"chart\",\"resolution\":[" << dims.n[0] << "," << dims.n[1] << "," << dims.n[2]
       << "],\"data_hash\":\"" << hex64(hash) << "\"}";
    bg.spec_json = os.str();
  }

  StructureResiduals res = bg.structure_residuals();
  if (res.max() > residual_gate)
    throw PreconditionError("structure-equation residual too large; chart data is inconsistent or under-resolved");
  return bg;
}

FieldValue Background::frame_derivative(int dir, const FieldValue& f) const {
  if (kind == Kind::Constant) return FieldValue::zero();
  if (!f.is_grid()) return FieldValue::zero();
  const std::array<FieldValue, 3>& comp = dir == 0 ? frame_T : frame_Z1;
  FieldValue acc = FieldValue::zero();
  for (int i = 0; i < 3; ++i) {
    FieldValue c = dir == 2 ? comp[i].conj() : comp[i];
    if (c.is_zero()) continue;
    acc = acc + c * partial(geom, f, i);
  }
  return acc;
}

FieldValue Background::tw_derivative(const FieldValue& f, int charge, int dir) const {
  FieldValue d = frame_derivative(dir, f);
  if (charge != 0 && !f.is_zero()) {
    FieldValue om = omega_dir(dir);
    if (!om.is_zero()) d = d + FieldValue::ratio(charge) * om * f;
  }
  return d;
}

FieldValue Background::cartan_tensor() const {
  // Q_11 = (1/6) Scal_{,11} + (i/2) Scal A_11 - A_{11,0} - (2i/3) A_{11,1bar 1}
  FieldValue s1 = tw_derivative(scal, 0, 1);
  FieldValue s11 = tw_derivative(s1, -1, 1);
  FieldValue a_0 = tw_derivative(a11, -2, 0);
  FieldValue a_b = tw_derivative(a11, -2, 2);
  FieldValue a_b1 = tw_derivative(a_b, -1, 1);
  return FieldValue::ratio(1, 6) * s11 + FieldValue::imag_ratio(1, 2) * scal * a11 - a_0 -
         FieldValue::imag_ratio(2, 3) * a_b1;
}

FieldValue Background::obstruction_density(double* imag_defect) const {
  // O = (nabla^1 nabla^1 - i A^{11}) Q_11 with indices raised by the unitary
  // Levi form: nabla^1 = nabla_{1bar}, A^{11} = conj(A_11).
  FieldValue q = cartan_tensor();
  FieldValue q1 = tw_derivative(q, -2, 2);
  FieldValue q11 = tw_derivative(q1, -1, 2);
  FieldValue o = q11 - FieldValue::imag_ratio(1) * a11.conj() * q;
  if (imag_defect) *imag_defect = o.max_abs_imag();
  return o;
}

StructureResiduals Background::structure_residuals() const {
  StructureResiduals out;
  if (kind == Kind::Constant) return out;

  std::array<FieldValue, 3> th1b = conj3(coframe_th1);
  std::array<FieldValue, 3> zbar = conj3(frame_Z1);

  // d theta = i theta^1 ^ theta^1bar, evaluated on the frame pairs.
  std::array<std::array<FieldValue, 3>, 3> dth;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      dth[i][j] = partial(geom, coframe_th[j], i) - partial(geom, coframe_th[i], j);
  if (!declared_flat_model) {
    double m = 0.0;
    m = std::max(m, eval_two_form(dth, frame_T, frame_Z1).max_abs());
    m = std::max(m, (eval_two_form(dth, frame_Z1, zbar) - FieldValue::imag_ratio(1)).max_abs());
    out.dtheta = m;
  }

  // d theta^1 = theta^1 ^ omega + conj(A_11) theta ^ theta^1bar.
  if (!declared_flat_model) {
    std::array<std::array<FieldValue, 3>, 3> dth1, rhs;
    FieldValue om_bar = -(omega1.conj());
    std::array<FieldValue, 3> om;
    for (int i = 0; i < 3; ++i)
      om[i] = omega0 * coframe_th[i] + omega1 * coframe_th1[i] + om_bar * th1b[i];
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        dth1[i][j] = partial(geom, coframe_th1[j], i) - partial(geom, coframe_th1[i], j);
        rhs[i][j] = coframe_th1[i] * om[j] - coframe_th1[j] * om[i] +
                    a11.conj() * (coframe_th[i] * th1b[j] - coframe_th[j] * th1b[i]);
      }
    double m = 0.0;
    std::array<std::array<FieldValue, 3>, 3> diff;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) diff[i][j] = dth1[i][j] - rhs[i][j];
    m = std::max(m, eval_two_form(diff, frame_T, frame_Z1).max_abs());
    m = std::max(m, eval_two_form(diff, frame_T, zbar).max_abs());
    m = std::max(m, eval_two_form(diff, frame_Z1, zbar).max_abs());
    out.dtheta1 = m;
  }

  out.metric_compat = (omega0 + omega0.conj()).max_abs();
  out.scal_imag = scal.max_abs_imag();
  return out;
}

double Background::consistency_residual() const {
  // Commutation identities of the Tanaka-Webster connection:
  //   [D1, D1bar] X = q Scal X - i D0 X
  //   [D0, D1]    X = -q (D1bar A11) X - A11 D1bar X
  // checked on a probe scalar and on the torsion itself.
  FieldValue f;
  if (kind == Kind::Grid) {
    auto g = std::make_shared<GridData>(geom->dims);
    const auto& n = geom->dims.n;
    std::size_t idx = 0;
    for (int i = 0; i < n[0]; ++i)
      for (int j = 0; j < n[1]; ++j)
        for (int k = 0; k < n[2]; ++k, ++idx) {
          double x = 2.0 * M_PI * i / n[0], y = 2.0 * M_PI * j / n[1], t = 2.0 * M_PI * k / n[2];
          g->v[idx] = {std::cos(x) + 0.4 * std::sin(y) * std::cos(t), 0.3 * std::sin(x + t)};
        }
    f = FieldValue::grid(g);
  } else {
    f = scal + a11;  // constants; charge handling is what matters
  }

  double m = 0.0;
  auto comm_11bar = [&](const FieldValue& x, int q) {
    FieldValue lhs = tw_derivative(tw_derivative(x, q, 2), q + 1, 1) -
                     tw_derivative(tw_derivative(x, q, 1), q - 1, 2);
    FieldValue rhs = FieldValue::ratio(q) * scal * x - FieldValue::imag_ratio(1) * tw_derivative(x, q, 0);
    return (lhs - rhs).max_abs();
  };
  auto comm_01 = [&](const FieldValue& x, int q) {
    FieldValue lhs = tw_derivative(tw_derivative(x, q, 1), q - 1, 0) -
                     tw_derivative(tw_derivative(x, q, 0), q, 1);
    FieldValue rhs = -(FieldValue::ratio(q) * tw_derivative(a11, -2, 2) * x) - a11 * tw_derivative(x, q, 2);
    return (lhs - rhs).max_abs();
  };
  m = std::max(m, comm_11bar(f, 0));
  m = std::max(m, comm_01(f, 0));
  m = std::max(m, comm_11bar(a11, -2));
  m = std::max(m, comm_01(a11, -2));
  return m;
}

ChartSpec torus_chart(std::array<int, 3> n, double eps) {
  ChartSpec spec;
  spec.dims.n = n;
  spec.dims.period = {2.0 * M_PI, 2.0 * M_PI, 2.0 * M_PI};
  auto gx = std::make_shared<GridData>(spec.dims);
  auto gy = std::make_shared<GridData>(spec.dims);
  auto zx = std::make_shared<GridData>(spec.dims);
  auto zy = std::make_shared<GridData>(spec.dims);
  std::size_t idx = 0;
  for (int i = 0; i < n[0]; ++i)
    for (int j = 0; j < n[1]; ++j)
      for (int k = 0; k < n[2]; ++k, ++idx) {
        double x = 2.0 * M_PI * i / n[0], y = 2.0 * M_PI * j / n[1], t = 2.0 * M_PI * k / n[2];
        double u = eps * (std::cos(x) + 0.7 * std::sin(y) + 0.5 * std::cos(t) + 0.3 * std::cos(x) * std::sin(y));
        double e = std::exp(u);
        gx->v[idx] = {e * std::cos(t), 0.0};
        gy->v[idx] = {-e * std::sin(t), 0.0};
        zx->v[idx] = {0.0, std::sin(t)};
        zy->v[idx] = {0.0, std::cos(t)};
      }
  spec.theta = {FieldValue::grid(gx), FieldValue::grid(gy), FieldValue::zero()};
  spec.z = {FieldValue::grid(zx), FieldValue::grid(zy), FieldValue::flt({1.0, 0.0})};
  return spec;
}

}  // namespace ach
