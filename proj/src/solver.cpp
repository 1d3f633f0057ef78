#include "ach/solver.hpp"

#include <cmath>

namespace ach {

namespace {

FieldValue rat_mul(const mpq_class& q, const FieldValue& f) {
  return FieldValue::constant(Scalar::exact(q)) * f;
}

std::pair<FieldValue, FieldValue> solve2(const mpq_class& a, const mpq_class& b, const mpq_class& c,
                                         const mpq_class& d, const FieldValue& r0, const FieldValue& r1) {
  mpq_class det = a * d - b * c;
  if (sgn(det) == 0) throw EngineError("singular 2x2 step system");
  FieldValue x0 = rat_mul(d / det, r0) - rat_mul(b / det, r1);
  FieldValue x1 = rat_mul(a / det, r1) - rat_mul(c / det, r0);
  return {x0, x1};
}

FieldValue make_real(const FieldValue& v, Mode mode, double* defect) {
  double im = v.max_abs_imag();
  if (defect) *defect = std::max(*defect, im);
  if (mode == Mode::Exact) {
    if (im != 0.0) throw EngineError("exact step produced a non-real diagonal update");
    return v;
  }
  return v.real_part();
}

struct EComponents {
  static constexpr int kCount = 7;
  static const char* name(int i) {
    static const char* names[kCount] = {"E_infinf", "E_inf0", "E_inf1", "E_00", "E_01", "E_11b", "E_11"};
    return names[i];
  }
  static Word word(int i) {
    static const Word words[kCount] = {Word{IDX_INF, IDX_INF}, Word{IDX_INF, IDX_ZERO}, Word{IDX_INF, IDX_ONE},
                                       Word{IDX_ZERO, IDX_ZERO}, Word{IDX_ZERO, IDX_ONE}, Word{IDX_ONE, IDX_BAR},
                                       Word{IDX_ONE, IDX_ONE}};
    return words[i];
  }
};

const Word kW11{IDX_INF, IDX_ONE, IDX_INF, IDX_ONE};
const Word kW01{IDX_INF, IDX_ZERO, IDX_INF, IDX_ONE};
const Word kW00{IDX_INF, IDX_ZERO, IDX_INF, IDX_ZERO};

}  // namespace

VariationCoeffs variation_matrix(int m) {
  if (m < 1) throw PreconditionError("variation order must be positive");
  VariationCoeffs v;
  mpq_class M(m);
  v.e_infinf_00 = -M * (M - 4) / 2;
  v.e_infinf_11b = -M * (M - 2);
  v.e_00_00 = -(M * M - 6 * M - 4) / 8;
  v.e_00_11b = (M - 2) / 2;
  v.e_11b_00 = (M - 4) / 8;
  v.e_11b_11b = -(M * M - 6 * M - 8) / 8;
  v.e_inf1_01 = RatC{mpq_class(0), -(M + 1) / 2};
  v.e_01_01 = -(M + 1) * (M - 5) / 8;
  v.e_11_11 = -M * (M - 4) / 8;
  v.w1_11 = (M * M - 2 * M) / 8;
  v.w0_00 = (M * M + 3 * M + 2) / 12;
  v.w0_11b = -(M * M + 4 * M + 4) / 12;
  v.det_00_11b = M * (M + 2) * (M - 6) * (M - 8) / 64;
  return v;
}

VariationDeltas variation_probe(const Background& bg, const MetricAnsatz& base, int m, const FieldValue& p00,
                                const FieldValue& p11b, const FieldValue& p01, const FieldValue& p11) {
  if (m > base.order) throw PreconditionError("probe order beyond truncation");
  MetricAnsatz pert = base;
  pert.phi00.set(m, pert.phi00.at(m) + p00);
  pert.phi11b.set(m, pert.phi11b.at(m) + p11b);
  pert.phi01.set(m, pert.phi01.at(m) + p01);
  pert.phi11.set(m, pert.phi11.at(m) + p11);
  CurvatureStack s0 = compute_stack(bg, base.truncated(m), STACK_WEYL);
  CurvatureStack s1 = compute_stack(bg, pert.truncated(m), STACK_WEYL);
  auto delta = [&](const ThetaTensor& a, const ThetaTensor& b, const Word& w) {
    return b.component(w).at(m) - a.component(w).at(m);
  };
  VariationDeltas d;
  d.e_infinf = delta(s0.einstein, s1.einstein, EComponents::word(0));
  d.e_inf0 = delta(s0.einstein, s1.einstein, EComponents::word(1));
  d.e_inf1 = delta(s0.einstein, s1.einstein, EComponents::word(2));
  d.e_00 = delta(s0.einstein, s1.einstein, EComponents::word(3));
  d.e_01 = delta(s0.einstein, s1.einstein, EComponents::word(4));
  d.e_11b = delta(s0.einstein, s1.einstein, EComponents::word(5));
  d.e_11 = delta(s0.einstein, s1.einstein, EComponents::word(6));
  d.w_inf1inf1 = delta(s0.weyl_asd, s1.weyl_asd, kW11);
  d.w_inf0inf0 = delta(s0.weyl_asd, s1.weyl_asd, kW00);
  return d;
}

SolveResult solve(const Background& bg, const SolveConfig& cfg) {
  const int N = cfg.order;
  if (N < 9) throw PreconditionError("truncation order must be at least 9");
  if (bg.mode == Mode::Exact && bg.is_grid()) throw PreconditionError("exact mode requires a constant background");
  Scalar lambda = cfg.lambda;
  if (lambda.is_exact() ? sgn(lambda.rat().im) != 0 : lambda.to_complex().imag() != 0.0)
    throw PreconditionError("lambda must be real");
  if (bg.mode == Mode::Float) lambda = Scalar::flt(lambda.to_complex());
  else if (!lambda.is_exact())
    throw PreconditionError("exact mode requires a rational lambda");

  SolveResult res;
  res.mode = bg.mode;
  res.order = N;
  res.lambda = lambda;
  res.background_spec = bg.spec_json;
  res.phi = MetricAnsatz::zero(N);

  const FieldValue lam = FieldValue::constant(lambda);
  const FieldValue obstruction = bg.obstruction_density();
  const FieldValue eta_target = lam * obstruction;
  const bool lambda_zero = lam.is_zero();

  auto record = [&](int m, const std::string& comp, double val, double scale) {
    double rel = val / std::max(scale, 1.0);
    res.residuals.push_back({m, comp, rel});
    res.step_residual_max = std::max(res.step_residual_max, rel);
    if (bg.mode == Mode::Exact && val != 0.0)
      throw EngineError("exact-mode verification failed at order " + std::to_string(m) + ": " + comp);
  };

  for (int m = 1; m <= N; ++m) {
    unsigned flags = STACK_WEYL | (cfg.verify_steps ? STACK_COTTON : 0u);
    CurvatureStack st = compute_stack(bg, res.phi.truncated(m), flags);

    FieldValue e[EComponents::kCount];
    for (int i = 0; i < EComponents::kCount; ++i)
      e[i] = st.einstein.component(EComponents::word(i)).at(m);
    FieldValue w11 = st.weyl_asd.component(kW11).at(m);
    FieldValue w01 = st.weyl_asd.component(kW01).at(m);
    FieldValue w00 = st.weyl_asd.component(kW00).at(m);

    double scale = 1.0;
    for (int i = 0; i < EComponents::kCount; ++i) scale = std::max(scale, e[i].max_abs());
    scale = std::max(scale, std::max(w11.max_abs(), w00.max_abs()));

    if (cfg.verify_steps) {
      // Orders below m were solved (or verified) at earlier steps; they must
      // have survived the later updates.
      for (int i = 0; i < EComponents::kCount; ++i) {
        double worst = 0.0;
        const JetSeries s = st.einstein.component(EComponents::word(i));
        for (int k = 0; k < m; ++k) worst = std::max(worst, s.at(k).max_abs());
        record(m, std::string("prior:") + EComponents::name(i), worst, scale);
      }
      {
        double wworst = 0.0;
        int upto = lambda_zero ? m : std::min(m, 6);
        for (const Word& w : {kW11, kW01, kW00}) {
          const JetSeries s = st.weyl_asd.component(w);
          for (int k = 0; k < upto; ++k) wworst = std::max(wworst, s.at(k).max_abs());
        }
        record(m, "prior:W_asd", wworst, scale);
      }

      FieldValue b1 = rat_mul(m - 8, e[0]) - rat_mul(4 * (m - 4), e[3]) - rat_mul(8 * (m - 2), e[5]);
      FieldValue b2 = rat_mul(m - 6, e[1]);
      FieldValue b3 = rat_mul(m - 5, e[2]) - FieldValue::imag_ratio(4) * e[4];
      record(m, "bianchi:trace1", b1.max_abs(), scale);
      record(m, "bianchi:trace2", b2.max_abs(), scale);
      record(m, "bianchi:trace3", b3.max_abs(), scale);
      FieldValue c1 = st.cotton_asd.component(Word{IDX_ONE, IDX_INF, IDX_ONE}).at(m) +
                      rat_mul(mpq_class(m - 2) / 4, e[6]);
      FieldValue c2 = st.cotton_asd.component(Word{IDX_ZERO, IDX_INF, IDX_ZERO}).at(m) +
                      rat_mul(mpq_class(5 * m) / 24, e[3]) - rat_mul(mpq_class(m - 12) / 96, e[0]) -
                      rat_mul(mpq_class(m + 6) / 12, e[5]);
      FieldValue c3 = st.cotton_asd.component(Word{IDX_INF, IDX_INF, IDX_ZERO}).at(m) +
                      rat_mul(mpq_class(m - 2) / 4, e[1]);
      record(m, "bianchi:cotton1", c1.max_abs(), scale);
      record(m, "bianchi:cotton2", c2.max_abs(), scale);
      record(m, "bianchi:cotton3", c3.max_abs(), scale);
    }

    if (cfg.check_variation_matrix) {
      VariationCoeffs vc = variation_matrix(m);
      FieldValue q00 = FieldValue::ratio(1), q11b = FieldValue::ratio(1, 2);
      FieldValue q01 = FieldValue::constant(Scalar::exact(mpq_class(1, 3), mpq_class(1, 5)));
      FieldValue q11 = FieldValue::constant(Scalar::exact(mpq_class(-1, 2), mpq_class(1, 7)));
      VariationDeltas d = variation_probe(bg, res.phi, m, q00, q11b, q01, q11);
      double worst = 0.0;
      auto chk = [&](const FieldValue& got, const FieldValue& want) {
        worst = std::max(worst, (got - want).max_abs());
      };
      chk(d.e_infinf, rat_mul(vc.e_infinf_00, q00) + rat_mul(vc.e_infinf_11b, q11b));
      chk(d.e_00, rat_mul(vc.e_00_00, q00) + rat_mul(vc.e_00_11b, q11b));
      chk(d.e_11b, rat_mul(vc.e_11b_00, q00) + rat_mul(vc.e_11b_11b, q11b));
      chk(d.e_inf1, FieldValue::constant(Scalar::exact(vc.e_inf1_01)) * q01);
      chk(d.e_01, rat_mul(vc.e_01_01, q01));
      chk(d.e_11, rat_mul(vc.e_11_11, q11));
      chk(d.w_inf1inf1, rat_mul(vc.w1_11, q11));
      chk(d.w_inf0inf0, rat_mul(vc.w0_00, q00) + rat_mul(vc.w0_11b, q11b));
      record(m, "variation_matrix_probe", worst, scale);
    }

    // Determine the order-m update.
    VariationCoeffs vc = variation_matrix(m);
    FieldValue p00, p11b, p01, p11;
    double reality = 0.0;
    p01 = -e[2] * FieldValue::constant(Scalar::exact(vc.e_inf1_01).inverse());
    if (m == 4)
      p11 = -(w11 * FieldValue::constant(Scalar::exact(mpq_class(1) / vc.w1_11)));
    else
      p11 = rat_mul(mpq_class(-1) / vc.e_11_11, e[6]);
    if (m == 6) {
      auto s = solve2(vc.e_infinf_00, vc.e_infinf_11b, vc.w0_00, vc.w0_11b, -e[0], eta_target - w00);
      p00 = s.first;
      p11b = s.second;
    } else if (m == 8) {
      auto s = solve2(vc.e_infinf_00, vc.e_infinf_11b, vc.e_00_00, vc.e_00_11b, -e[0], -e[3]);
      p00 = s.first;
      p11b = s.second;
    } else {
      auto s = solve2(vc.e_00_00, vc.e_00_11b, vc.e_11b_00, vc.e_11b_11b, -e[3], -e[5]);
      p00 = s.first;
      p11b = s.second;
    }
    p00 = make_real(p00, bg.mode, &reality);
    p11b = make_real(p11b, bg.mode, &reality);
    if (bg.mode == Mode::Float) res.residuals.push_back({m, "step_reality_defect", reality});

    res.phi.phi00.set(m, p00);
    res.phi.phi11b.set(m, p11b);
    res.phi.phi01.set(m, p01);
    res.phi.phi11.set(m, p11);
  }

  // Final full-order verification pass.
  CurvatureStack fin = compute_stack(bg, res.phi, STACK_WEYL | STACK_COTTON);
  for (int k = 0; k <= N; ++k) {
    double ek = 0.0;
    for (int i = 0; i < EComponents::kCount; ++i)
      ek = std::max(ek, fin.einstein.component(EComponents::word(i)).at(k).max_abs());
    res.residuals.push_back({k, "final:E", ek});
    res.einstein_max = std::max(res.einstein_max, ek);
  }
  fin.weyl_asd.for_each_canonical([&](const Word& w) {
    const JetSeries s = fin.weyl_asd.component(w);
    for (int k = 0; k <= N; ++k) {
      double v = s.at(k).max_abs();
      res.weyl_total_max = std::max(res.weyl_total_max, v);
      if (k < 6) res.weyl_below6_max = std::max(res.weyl_below6_max, v);
    }
  });
  {
    std::vector<double> wk(N + 1, 0.0);
    fin.weyl_asd.for_each_canonical([&](const Word& w) {
      const JetSeries s = fin.weyl_asd.component(w);
      for (int k = 0; k <= N; ++k) wk[k] = std::max(wk[k], s.at(k).max_abs());
    });
    for (int k = 0; k <= N; ++k) res.residuals.push_back({k, "final:W_asd", wk[k]});
  }
  res.eta = fin.weyl_asd.component(kW00).at(6);
  res.eta_defect = (res.eta - eta_target).max_abs();
  if (bg.mode == Mode::Exact && res.eta_defect != 0.0)
    throw EngineError("exact-mode eta normalisation failed");
  return res;
}

FieldValue eta_extract(const Background& bg, const SolveResult& res, double tol) {
  CurvatureStack fin = compute_stack(bg, res.phi, STACK_WEYL);
  double low = 0.0;
  fin.weyl_asd.for_each_canonical([&](const Word& w) {
    const JetSeries s = fin.weyl_asd.component(w);
    for (int k = 0; k < 6 && k <= res.order; ++k) low = std::max(low, s.at(k).max_abs());
  });
  if (low > tol) throw PreconditionError("anti-self-dual Weyl tensor is not O(rho^6)");
  return fin.weyl_asd.component(kW00).at(6);
}

VerifyReport verify(const Background& bg, const SolveResult& res) {
  VerifyReport rep;
  CurvatureStack fin = compute_stack(bg, res.phi, STACK_WEYL);
  fin.einstein.for_each_canonical([&](const Word& w) {
    rep.einstein_max = std::max(rep.einstein_max, fin.einstein.component(w).max_abs());
  });
  fin.weyl_asd.for_each_canonical([&](const Word& w) {
    const JetSeries s = fin.weyl_asd.component(w);
    for (int k = 0; k <= res.order; ++k) {
      double v = s.at(k).max_abs();
      rep.weyl_total_max = std::max(rep.weyl_total_max, v);
      if (k < 6) rep.weyl_below6_max = std::max(rep.weyl_below6_max, v);
    }
  });
  for (int k = 0; k <= res.order; ++k) {
    bool odd = k % 2 == 1;
    if (odd) {
      rep.evenness_max = std::max(rep.evenness_max, res.phi.phi00.at(k).max_abs());
      rep.evenness_max = std::max(rep.evenness_max, res.phi.phi11b.at(k).max_abs());
      rep.evenness_max = std::max(rep.evenness_max, res.phi.phi11.at(k).max_abs());
    } else {
      rep.evenness_max = std::max(rep.evenness_max, res.phi.phi01.at(k).max_abs());
    }
  }
  FieldValue target = FieldValue::constant(res.lambda) * bg.obstruction_density();
  rep.eta_defect = (fin.weyl_asd.component(kW00).at(6) - target).max_abs();
  return rep;
}

LambdaSweepReport lambda_sweep_report(const std::vector<SolveResult>& results, const std::vector<long>& lambdas) {
  if (results.size() != lambdas.size() || results.size() < 2)
    throw PreconditionError("lambda sweep needs matching results and lambdas");
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (lambdas[i] != lambdas[i - 1] + 1) throw PreconditionError("lambda sweep must be consecutive integers");
  std::size_t zero_at = 0;
  bool has_zero = false;
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    if (lambdas[i] == 0) {
      zero_at = i;
      has_zero = true;
    }
  if (!has_zero) throw PreconditionError("lambda sweep must contain 0");

  LambdaSweepReport rep;
  const int N = results[0].order;
  auto series_of = [&](const SolveResult& r, int comp) -> const JetSeries& {
    switch (comp) {
      case 0: return r.phi.phi00;
      case 1: return r.phi.phi11b;
      case 2: return r.phi.phi01;
      default: return r.phi.phi11;
    }
  };
  for (int comp = 0; comp < 4; ++comp) {
    for (int k = 0; k <= N; ++k) {
      std::vector<FieldValue> seq;
      double scale = 1.0;
      for (const auto& r : results) {
        seq.push_back(series_of(r, comp).at(k));
        scale = std::max(scale, seq.back().max_abs());
      }
      for (const auto& v : seq) {
        double dep = (v - seq[zero_at]).max_abs() / scale;
        if (comp == 2) rep.g01_lambda_dependence = std::max(rep.g01_lambda_dependence, dep);
        if (comp == 3 && dep > 0.0) {
          rep.g11_lambda_dependence = std::max(rep.g11_lambda_dependence, dep);
          if (rep.g11_first_order < 0 || k < rep.g11_first_order) rep.g11_first_order = k;
        }
      }
      int allowed_degree = k / 6;
      int diffs = allowed_degree + 1;
      if (int(seq.size()) <= diffs) continue;
      for (int d = 0; d < diffs; ++d)
        for (std::size_t i = 0; i + 1 < seq.size() - d; ++i) seq[i] = seq[i + 1] - seq[i];
      for (std::size_t i = 0; i + diffs < results.size(); ++i)
        rep.degree_violation = std::max(rep.degree_violation, seq[i].max_abs() / scale);
    }
  }
  return rep;
}

}  // namespace ach
