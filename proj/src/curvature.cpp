#include "ach/curvature.hpp"

#include <omp.h>

namespace ach {

namespace {

const int kAll[4] = {IDX_INF, IDX_ZERO, IDX_ONE, IDX_BAR};

int tw_dir_of(int letter) { return letter == IDX_ZERO ? 0 : (letter == IDX_ONE ? 1 : 2); }

void parallel_fill(ThetaTensor& out, const std::function<JetSeries(const Word&)>& f) {
  std::vector<Word> words = out.canonical_words();
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < std::int64_t(words.size()); ++i) {
    JetSeries s = f(words[i]);
    if (!s.is_zero()) out.set(words[i], std::move(s));
  }
}

}  // namespace

void MetricAnsatz::check_invariants(double tol) const {
  auto lead = [&](const JetSeries& s) { return s.order() >= 0 ? s.at(0).max_abs() : 0.0; };
  if (lead(phi00) > tol || lead(phi11b) > tol || lead(phi01) > tol || lead(phi11) > tol)
    throw PreconditionError("metric deviation must vanish at rho = 0");
  if ((phi00 - phi00.conj()).max_abs() > tol || (phi11b - phi11b.conj()).max_abs() > tol)
    throw PreconditionError("phi_00 and phi_11bar must be real");
}

ThetaTensor metric_tensor(const MetricAnsatz& m) {
  const int N = m.order;
  ThetaTensor g(2, 0u, N);
  g.set(Word{IDX_INF, IDX_INF}, JetSeries::constant(N, FieldValue::ratio(4)));
  JetSeries one = JetSeries::one(N);
  g.set(Word{IDX_ZERO, IDX_ZERO}, one + m.phi00);
  g.set(Word{IDX_ZERO, IDX_ONE}, m.phi01);
  g.set(Word{IDX_ONE, IDX_ZERO}, m.phi01);
  g.set(Word{IDX_ONE, IDX_ONE}, m.phi11);
  g.set(Word{IDX_ONE, IDX_BAR}, one + m.phi11b);
  return g;
}

ThetaTensor metric_inverse(const ThetaTensor& g, double float_tol) {
  const int N = g.order();
  ThetaTensor inv(2, 0b11u, N);
  inv.set(Word{IDX_INF, IDX_INF}, JetSeries::constant(N, FieldValue::ratio(1, 4)));

  JetSeries a = g.component(Word{IDX_ZERO, IDX_ZERO});
  JetSeries b = g.component(Word{IDX_ZERO, IDX_ONE});
  JetSeries c = g.component(Word{IDX_ZERO, IDX_BAR});
  JetSeries d = g.component(Word{IDX_ONE, IDX_ONE});
  JetSeries e = g.component(Word{IDX_ONE, IDX_BAR});
  JetSeries f = g.component(Word{IDX_BAR, IDX_BAR});

  JetSeries det3 = jet_mul(a, jet_mul(d, f) - jet_mul(e, e)) - jet_mul(b, jet_mul(b, f) - jet_mul(c, e)) +
                   jet_mul(c, jet_mul(b, e) - jet_mul(c, d));
  JetSeries invdet = jet_inverse(det3, float_tol);

  auto put = [&](int i, int j, const JetSeries& adj) {
    JetSeries v = jet_mul(adj, invdet);
    inv.set(Word{i, j}, v);
    if (i != j) inv.set(Word{j, i}, v);
  };
  put(IDX_ZERO, IDX_ZERO, jet_mul(d, f) - jet_mul(e, e));
  put(IDX_ZERO, IDX_ONE, jet_mul(c, e) - jet_mul(b, f));
  put(IDX_ZERO, IDX_BAR, jet_mul(b, e) - jet_mul(c, d));
  put(IDX_ONE, IDX_ONE, jet_mul(a, f) - jet_mul(c, c));
  put(IDX_ONE, IDX_BAR, jet_mul(c, b) - jet_mul(a, e));
  put(IDX_BAR, IDX_BAR, jet_mul(a, d) - jet_mul(b, b));
  return inv;
}

ThetaTensor extended_cov_derivative(const Background& bg, const ThetaTensor& t) {
  const int N = t.order();
  ThetaTensor out(t.rank() + 1, t.upmask() << 1, N);
  parallel_fill(out, [&](const Word& w) -> JetSeries {
    int dir = w.a[0];
    Word base;
    base.rank = t.rank();
    for (int i = 0; i < t.rank(); ++i) base.a[i] = w.a[i + 1];
    if (t.known_zero(base)) return JetSeries(N);
    JetSeries s = t.component(base);
    if (dir == IDX_INF) return radial_affine(s, -t.inf_weight(base));
    int q = t.charge(base);
    int twdir = tw_dir_of(dir);
    int shift = dir == IDX_ZERO ? 2 : 1;
    JetSeries res(N);
    for (int k = 0; k + shift <= N; ++k) {
      FieldValue dv = bg.tw_derivative(s.at(k), q, twdir);
      if (!dv.is_zero()) res.set(k + shift, std::move(dv));
    }
    return res;
  });
  return out;
}

ThetaTensor extended_torsion(const Background& bg, int order) {
  ThetaTensor t(3, 0b100u, order);
  t.set(Word{IDX_ONE, IDX_BAR, IDX_ZERO}, JetSeries::constant(order, FieldValue::imag_ratio(1)));
  if (!bg.a11.is_zero()) {
    JetSeries a2 = JetSeries::monomial(order, 2, bg.a11);
    t.set(Word{IDX_ZERO, IDX_ONE, IDX_BAR}, a2);
    t.set(Word{IDX_ONE, IDX_ZERO, IDX_BAR}, -a2);
  }
  return t;
}

ThetaTensor extended_curvature(const Background& bg, int order) {
  ThetaTensor r(4, 0b0010u, order);
  if (!bg.scal.is_zero()) {
    JetSeries s2 = JetSeries::monomial(order, 2, bg.scal);
    r.set(Word{IDX_ONE, IDX_ONE, IDX_ONE, IDX_BAR}, s2);
    r.set(Word{IDX_ONE, IDX_ONE, IDX_BAR, IDX_ONE}, -s2);
  }
  FieldValue da = bg.tw_derivative(bg.a11, -2, 2);  // A_{11,1bar}
  if (!da.is_zero()) {
    JetSeries d3 = JetSeries::monomial(order, 3, da);
    r.set(Word{IDX_ONE, IDX_ONE, IDX_ZERO, IDX_ONE}, -d3);
    r.set(Word{IDX_ONE, IDX_ONE, IDX_ONE, IDX_ZERO}, d3);
    JetSeries d3c = JetSeries::monomial(order, 3, da.conj());  // A^1_{1bar,1}
    r.set(Word{IDX_ONE, IDX_ONE, IDX_ZERO, IDX_BAR}, d3c);
    r.set(Word{IDX_ONE, IDX_ONE, IDX_BAR, IDX_ZERO}, -d3c);
  }
  return r;
}

ThetaTensor raise_slot(const ThetaTensor& t, int slot, const ThetaTensor& ginv) {
  ThetaTensor out(t.rank(), t.upmask() | (1u << slot), t.order());
  parallel_fill(out, [&](const Word& w) {
    JetSeries acc(t.order());
    for (int m : kAll) {
      Word src = w.with(slot, m);
      if (t.known_zero(src) || ginv.known_zero(Word{w.a[slot], m})) continue;
      acc.add_mul(ginv.component(Word{w.a[slot], m}), t.component(src));
    }
    return acc;
  });
  return out;
}

ThetaTensor lower_slot(const ThetaTensor& t, int slot, const ThetaTensor& g) {
  ThetaTensor out(t.rank(), t.upmask() & ~(1u << slot), t.order());
  parallel_fill(out, [&](const Word& w) {
    JetSeries acc(t.order());
    for (int m : kAll) {
      Word src = w.with(slot, m);
      if (t.known_zero(src) || g.known_zero(Word{m, w.a[slot]})) continue;
      acc.add_mul(g.component(Word{m, w.a[slot]}), t.component(src));
    }
    return acc;
  });
  return out;
}

ThetaTensor difference_tensor_low(const Background& bg, const ThetaTensor& g, const ThetaTensor& nabla_g,
                                  const ThetaTensor& tor_low) {
  (void)bg;
  const int N = g.order();
  ThetaTensor d(3, 0u, N);
  parallel_fill(d, [&](const Word& w) {
    int I = w.a[0], J = w.a[1], K = w.a[2];
    JetSeries s = nabla_g.component(Word{I, J, K}) + nabla_g.component(Word{J, K, I}) -
                  nabla_g.component(Word{K, I, J}) - tor_low.component(Word{I, J, K}) +
                  tor_low.component(Word{J, K, I}) - tor_low.component(Word{K, I, J});
    return s.scaled(FieldValue::ratio(1, 2));
  });
  return d;
}

ThetaTensor lc_cov_derivative(const Background& bg, const ThetaTensor& d_up, const ThetaTensor& t) {
  if (t.upmask() != 0) throw PreconditionError("lc_cov_derivative expects an all-lower tensor");
  ThetaTensor nb = extended_cov_derivative(bg, t);
  ThetaTensor out(t.rank() + 1, 0u, t.order());
  parallel_fill(out, [&](const Word& w) {
    int dir = w.a[0];
    Word base;
    base.rank = t.rank();
    for (int i = 0; i < t.rank(); ++i) base.a[i] = w.a[i + 1];
    JetSeries acc = nb.component(w);
    for (int s = 0; s < t.rank(); ++s)
      for (int m : kAll) {
        Word dw{dir, base.a[s], m};
        dw.rank = 3;
        if (d_up.known_zero(dw) || t.known_zero(base.with(s, m))) continue;
        acc -= jet_mul(d_up.component(dw), t.component(base.with(s, m)));
      }
    return acc;
  });
  return out;
}

ThetaTensor CurvatureStack::half_eps_contract(const ThetaTensor& t) const {
  const int r = t.rank();
  ThetaTensor up = raise_slot(raise_slot(t, r - 2, ginv), r - 1, ginv);
  JetSeries ivol = vol.scaled(FieldValue::imag_ratio(1));
  ThetaTensor out(r, 0u, t.order());
  parallel_fill(out, [&](const Word& w) {
    JetSeries acc(t.order());
    for (int m : kAll)
      for (int n : kAll) {
        Word ew{w.a[r - 2], w.a[r - 1], m, n};
        ew.rank = 4;
        int sign = eps_sign(ew);
        if (sign == 0) continue;
        Word src = w.with(r - 2, m).with(r - 1, n);
        if (up.known_zero(src)) continue;
        JetSeries term = jet_mul(ivol, up.component(src));
        if (sign > 0)
          acc += term;
        else
          acc -= term;
      }
    return acc.scaled(FieldValue::ratio(1, 2));
  });
  return out;
}

CurvatureStack compute_stack(const Background& bg, const MetricAnsatz& m, unsigned flags) {
  CurvatureStack st;
  const int N = m.order;
  st.order = N;
  const double tol = bg.float_tol();

  st.g = metric_tensor(m);
  st.ginv = metric_inverse(st.g, tol);
  ThetaTensor nabla_g = extended_cov_derivative(bg, st.g);
  st.tor_up = extended_torsion(bg, N);
  st.tor_low = lower_slot(st.tor_up, 2, st.g);
  st.d_low = difference_tensor_low(bg, st.g, nabla_g, st.tor_low);
  st.d_up = raise_slot(st.d_low, 2, st.ginv);

  ThetaTensor nab_d = extended_cov_derivative(bg, st.d_up);
  ThetaTensor rbar = extended_curvature(bg, N);

  st.riem = ThetaTensor(4, 0b0010u, N);
  parallel_fill(st.riem, [&](const Word& w) {
    int I = w.a[0], J = w.a[1], K = w.a[2], L = w.a[3];
    JetSeries acc = rbar.component(w);
    acc += nab_d.component(Word{K, L, I, J});
    acc -= nab_d.component(Word{L, K, I, J});
    for (int mm : kAll) {
      Word kmj{K, mm, J}, lim{L, I, mm}, lmj{L, mm, J}, kim{K, I, mm};
      if (!(st.d_up.known_zero(kmj) || st.d_up.known_zero(lim)))
        acc.add_mul(st.d_up.component(kmj), st.d_up.component(lim));
      if (!(st.d_up.known_zero(lmj) || st.d_up.known_zero(kim))) {
        JetSeries neg = jet_mul(st.d_up.component(lmj), st.d_up.component(kim));
        acc -= neg;
      }
      Word klm{K, L, mm}, mij{mm, I, J};
      if (!(st.tor_up.known_zero(klm) || st.d_up.known_zero(mij)))
        acc.add_mul(st.tor_up.component(klm), st.d_up.component(mij));
    }
    return acc;
  });

  st.ricci = ThetaTensor(2, 0u, N);
  parallel_fill(st.ricci, [&](const Word& w) {
    JetSeries acc(N);
    for (int k : kAll) {
      Word src{w.a[1], k, k, w.a[0]};
      acc += st.riem.component(src);
    }
    return acc;
  });

  st.scal = JetSeries(N);
  for (int i : kAll)
    for (int j : kAll) {
      Word ij{i, j};
      if (st.ginv.known_zero(ij) || st.ricci.known_zero(ij)) continue;
      st.scal.add_mul(st.ginv.component(ij), st.ricci.component(ij));
    }

  st.einstein = ThetaTensor(2, 0u, N);
  parallel_fill(st.einstein, [&](const Word& w) {
    return st.ricci.component(w) + st.g.component(w).scaled(FieldValue::ratio(3, 2));
  });

  if (flags & (STACK_WEYL | STACK_COTTON | STACK_DIV_WEYL)) {
    st.schouten = ThetaTensor(2, 0u, N);
    parallel_fill(st.schouten, [&](const Word& w) {
      return st.ricci.component(w).scaled(FieldValue::ratio(1, 2)) -
             jet_mul(st.scal, st.g.component(w)).scaled(FieldValue::ratio(1, 12));
    });
    st.riem_low = lower_slot(st.riem, 1, st.g);

    st.weyl_low = ThetaTensor(4, 0u, N);
    parallel_fill(st.weyl_low, [&](const Word& w) {
      int I = w.a[0], J = w.a[1], K = w.a[2], L = w.a[3];
      JetSeries acc = st.riem_low.component(w);
      acc.add_mul(st.g.component(Word{I, K}), st.schouten.component(Word{J, L}));
      acc -= jet_mul(st.g.component(Word{J, K}), st.schouten.component(Word{I, L}));
      acc.add_mul(st.g.component(Word{J, L}), st.schouten.component(Word{I, K}));
      acc -= jet_mul(st.g.component(Word{I, L}), st.schouten.component(Word{J, K}));
      return acc;
    });

    // Volume density: det(g) = 4 det(block), block over {0, 1, 1bar};
    // orientation theta ^ dtheta ^ drho > 0 gives eps_{0 1 1bar inf} = i vol.
    {
      JetSeries a = st.g.component(Word{IDX_ZERO, IDX_ZERO});
      JetSeries b = st.g.component(Word{IDX_ZERO, IDX_ONE});
      JetSeries c = st.g.component(Word{IDX_ZERO, IDX_BAR});
      JetSeries d = st.g.component(Word{IDX_ONE, IDX_ONE});
      JetSeries e = st.g.component(Word{IDX_ONE, IDX_BAR});
      JetSeries f = st.g.component(Word{IDX_BAR, IDX_BAR});
      JetSeries det3 = jet_mul(a, jet_mul(d, f) - jet_mul(e, e)) -
                       jet_mul(b, jet_mul(b, f) - jet_mul(c, e)) + jet_mul(c, jet_mul(b, e) - jet_mul(c, d));
      st.vol = jet_sqrt((-det3).scaled(FieldValue::ratio(4)), tol);
    }

    st.weyl_asd = ThetaTensor(4, 0u, N);
    {
      ThetaTensor dual = st.half_eps_contract(st.weyl_low);
      parallel_fill(st.weyl_asd, [&](const Word& w) {
        return (st.weyl_low.component(w) - dual.component(w)).scaled(FieldValue::ratio(1, 2));
      });
    }
  }

  if (flags & (STACK_COTTON | STACK_DIV_WEYL)) {
    ThetaTensor nab_p = lc_cov_derivative(bg, st.d_up, st.schouten);
    st.cotton = ThetaTensor(3, 0u, N);
    parallel_fill(st.cotton, [&](const Word& w) {
      int I = w.a[0], J = w.a[1], K = w.a[2];
      return nab_p.component(Word{K, I, J}) - nab_p.component(Word{J, I, K});
    });
    ThetaTensor dual = st.half_eps_contract(st.cotton);
    st.cotton_asd = ThetaTensor(3, 0u, N);
    parallel_fill(st.cotton_asd, [&](const Word& w) {
      return (st.cotton.component(w) - dual.component(w)).scaled(FieldValue::ratio(1, 2));
    });
  }

  if (flags & STACK_DIV_WEYL) {
    // nabla^I W^-_{IJKL} computed pairwise without materialising the rank-5
    // derivative.
    st.div_weyl_asd = ThetaTensor(3, 0u, N);
    parallel_fill(st.div_weyl_asd, [&](const Word& w) {
      JetSeries acc(N);
      for (int i : kAll)
        for (int mdir : kAll) {
          Word gim{i, mdir};
          if (st.ginv.known_zero(gim)) continue;
          Word full{i, w.a[0], w.a[1], w.a[2]};
          full.rank = 4;
          // nabla_{mdir} W^-_{full}
          JetSeries nw(N);
          if (!st.weyl_asd.known_zero(full)) {
            JetSeries s = st.weyl_asd.component(full);
            if (mdir == IDX_INF) {
              nw = radial_affine(s, -st.weyl_asd.inf_weight(full));
            } else {
              int q = st.weyl_asd.charge(full);
              int shift = mdir == IDX_ZERO ? 2 : 1;
              for (int k = 0; k + shift <= N; ++k) {
                FieldValue dv = bg.tw_derivative(s.at(k), q, tw_dir_of(mdir));
                if (!dv.is_zero()) nw.set(k + shift, std::move(dv));
              }
            }
          }
          for (int s = 0; s < 4; ++s)
            for (int p : kAll) {
              Word dw{mdir, full.a[s], p};
              if (st.d_up.known_zero(dw) || st.weyl_asd.known_zero(full.with(s, p))) continue;
              nw -= jet_mul(st.d_up.component(dw), st.weyl_asd.component(full.with(s, p)));
            }
          if (!nw.is_zero()) acc.add_mul(st.ginv.component(gim), nw);
        }
      return acc;
    });
  }

  return st;
}

}  // namespace ach
