#include "ach/gjms.hpp"

#include <cstdint>

namespace ach {

namespace {

const int kAll[4] = {IDX_INF, IDX_ZERO, IDX_ONE, IDX_BAR};

int tw_dir_of(int letter) { return letter == IDX_ZERO ? 0 : (letter == IDX_ONE ? 1 : 2); }
int charge_of_lower(int letter) { return letter == IDX_ONE ? -1 : (letter == IDX_BAR ? 1 : 0); }

JetSeries tw_shifted(const Background& bg, const JetSeries& s, int charge, int dir_letter) {
  const int N = s.order();
  int shift = dir_letter == IDX_ZERO ? 2 : 1;
  JetSeries out(N);
  for (int k = 0; k + shift <= N; ++k) {
    FieldValue dv = bg.tw_derivative(s.at(k), charge, tw_dir_of(dir_letter));
    if (!dv.is_zero()) out.set(k + shift, std::move(dv));
  }
  return out;
}

}  // namespace

LaplacianContext make_laplacian_context(const Background& bg, const MetricAnsatz& phi) {
  LaplacianContext ctx;
  ctx.bg = &bg;
  ctx.order = phi.order;
  ThetaTensor g = metric_tensor(phi);
  ctx.ginv = metric_inverse(g, bg.float_tol());
  ThetaTensor nabla_g = extended_cov_derivative(bg, g);
  ThetaTensor tor_up = extended_torsion(bg, phi.order);
  ThetaTensor tor_low = lower_slot(tor_up, 2, g);
  ThetaTensor d_low = difference_tensor_low(bg, g, nabla_g, tor_low);
  ctx.d_up = raise_slot(d_low, 2, ctx.ginv);
  return ctx;
}

JetSeries laplacian_bracket(const LaplacianContext& ctx, int shift, const JetSeries& f, const mpq_class& eig) {
  const Background& bg = *ctx.bg;
  const int N = ctx.order;
  if (f.order() != N) throw PreconditionError("bracket input must match the context order");

  // First covariant derivative of u = rho^shift f (scalar), as a lower
  // rank-1 family sharing the same overall power.
  JetSeries v[4];
  v[IDX_INF] = radial_affine(f, shift);
  v[IDX_ZERO] = tw_shifted(bg, f, 0, IDX_ZERO);
  v[IDX_ONE] = tw_shifted(bg, f, 0, IDX_ONE);
  v[IDX_BAR] = tw_shifted(bg, f, 0, IDX_BAR);

  // Hessian H_IJ = nabla-bar_I v_J - D_IJ^K v_K, then Delta u = -g^{IJ} H_IJ.
  JetSeries acc(N);
  for (int i : kAll)
    for (int j : kAll) {
      Word ij{i, j};
      if (ctx.ginv.known_zero(ij)) continue;
      JetSeries h(N);
      if (!v[j].is_zero()) {
        if (i == IDX_INF)
          h = radial_affine(v[j], shift - 1 - (j == IDX_ZERO ? 1 : 0));
        else
          h = tw_shifted(bg, v[j], charge_of_lower(j), i);
      }
      for (int k : kAll) {
        Word dw{i, j, k};
        if (ctx.d_up.known_zero(dw) || v[k].is_zero()) continue;
        h -= jet_mul(ctx.d_up.component(dw), v[k]);
      }
      if (!h.is_zero()) acc.add_mul(ctx.ginv.component(ij), h);
    }
  JetSeries out = -acc;
  out += f.scaled(FieldValue::constant(Scalar::exact(eig)));
  return out;
}

JetSeries laplacian_shifted_apply(const Background& bg, const SolveResult& src, int k, int j,
                                  const FieldValue& field) {
  LaplacianContext ctx = make_laplacian_context(bg, src.phi);
  JetSeries f = JetSeries::constant(src.order, field);
  return laplacian_bracket(ctx, -k + 2 + j, f, mpq_class(k) * k / 4 - 1);
}

mpq_class gjms_normalization(int k) {
  mpq_class c(1, 2);
  for (int i = 2; i <= k; ++i) c *= i;
  for (int i = 2; i <= k - 1; ++i) c *= i;
  if (k % 2 == 0) c = -c;
  return c;
}

GjmsOutput gjms_apply(const Background& bg, const SolveResult& src, int k, const FieldValue& f) {
  if (k < 1) throw PreconditionError("operator level k must be positive");
  if (src.order < 2 * k + 2) throw PreconditionError("solve truncation too shallow for P_{2k}");
  LaplacianContext ctx = make_laplacian_context(bg, src.phi);
  const mpq_class eig = mpq_class(k) * k / 4 - 1;
  const int N = src.order;

  GjmsOutput out;
  out.recursion.push_back(f);
  JetSeries F = JetSeries::constant(N, f);
  for (int j = 1; j <= 2 * k - 1; ++j) {
    long denom = long(j) * (j - 2 * k);
    if (denom == 0) throw EngineError("indicial guard violated");
    out.indicial_factors.push_back(ratq(4, denom));
    JetSeries b = laplacian_bracket(ctx, -k + 2, F, eig);
    FieldValue fj = b.at(j) * FieldValue::ratio(4, denom);
    out.recursion.push_back(fj);
    F.set(j, fj);
  }
  JetSeries b = laplacian_bracket(ctx, -k + 2, F, eig);
  // Log-term coefficient: G|_M = (2/k) * obstruction; P_{2k} f is its
  // normalised multiple.
  FieldValue gm = b.at(2 * k) * FieldValue::ratio(2, k);
  out.pf = FieldValue::constant(Scalar::exact(gjms_normalization(k))) * gm;
  return out;
}

FieldValue sublaplacian(const Background& bg, const FieldValue& f) {
  FieldValue d1 = bg.tw_derivative(f, 0, 1);
  FieldValue db = bg.tw_derivative(f, 0, 2);
  return -(bg.tw_derivative(db, 1, 1) + bg.tw_derivative(d1, -1, 2));
}

cplx l2_pairing(const Background& bg, const FieldValue& u, const FieldValue& v) {
  if (!bg.is_grid()) throw PreconditionError("L^2 pairing needs a grid background");
  const GridDims& dims = bg.geom->dims;
  double cell = 1.0;
  for (int a = 0; a < 3; ++a) cell *= dims.period[a] / dims.n[a];
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < dims.size(); ++i)
    acc += u.sample(i) * std::conj(v.sample(i)) * bg.volume.sample(i);
  return acc * cell;
}

std::vector<std::vector<cplx>> gjms_matrix(const Background& bg, const SolveResult& src, int k,
                                           const std::vector<FieldValue>& basis) {
  if (!bg.is_grid()) throw PreconditionError("gjms_matrix needs a grid background");
  std::vector<FieldValue> images(basis.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < std::int64_t(basis.size()); ++i)
    images[i] = gjms_apply(bg, src, k, basis[i]).pf;
  std::vector<std::vector<cplx>> m(basis.size(), std::vector<cplx>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) m[i][j] = l2_pairing(bg, images[j], basis[i]);
  return m;
}

}  // namespace ach
