#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ach/solver.hpp"

#include "oracle_tables.hpp"

#include <random>

using namespace ach;
using oracle::d_table;
using oracle::e_table;
using oracle::r_table;
using oracle::vanishes_through;

namespace {

constexpr int kOrder = 10;

FieldValue rnd_rat(std::mt19937& rng, bool real_only = false) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 9);
  FieldValue v = FieldValue::ratio(num(rng), den(rng));
  if (!real_only) v = v + FieldValue::imag_ratio(num(rng), den(rng));
  return v;
}

MetricAnsatz pure_perturbation(int m, std::mt19937& rng) {
  MetricAnsatz phi = MetricAnsatz::zero(kOrder);
  phi.phi00.set(m, rnd_rat(rng, true));
  phi.phi11b.set(m, rnd_rat(rng, true));
  phi.phi01.set(m, rnd_rat(rng));
  phi.phi11.set(m, rnd_rat(rng));
  return phi;
}

MetricAnsatz random_ansatz(std::mt19937& rng) {
  MetricAnsatz phi = MetricAnsatz::zero(kOrder);
  for (int k = 1; k <= kOrder; ++k) {
    phi.phi00.set(k, rnd_rat(rng, true));
    phi.phi11b.set(k, rnd_rat(rng, true));
    phi.phi01.set(k, rnd_rat(rng));
    phi.phi11.set(k, rnd_rat(rng));
  }
  return phi;
}

std::vector<Background> test_backgrounds() {
  return {
      Background::heisenberg(),
      Background::constant_background(Scalar::exact(mpq_class(0)),
                                      Scalar::exact(ratq(1, 3), ratq(1, 5))),
      Background::constant_background(Scalar::exact(mpq_class(2)), Scalar::exact(mpq_class(0))),
      Background::constant_background(Scalar::exact(ratq(1, 2)), Scalar::exact(mpq_class(0), ratq(-1, 2))),
  };
}

const Word kRWords[7] = {
    Word{IDX_INF, IDX_ZERO, IDX_INF, IDX_ZERO}, Word{IDX_ZERO, IDX_ONE, IDX_INF, IDX_ZERO},
    Word{IDX_INF, IDX_ONE, IDX_INF, IDX_ONE},   Word{IDX_ZERO, IDX_ONE, IDX_INF, IDX_ONE},
    Word{IDX_ZERO, IDX_BAR, IDX_INF, IDX_ONE},  Word{IDX_ONE, IDX_BAR, IDX_INF, IDX_ONE},
    Word{IDX_ONE, IDX_BAR, IDX_INF, IDX_ZERO}};

}  // namespace

TEST_CASE("flat model: Einstein and anti-self-dual Weyl tensors vanish identically") {
  Background bg = Background::heisenberg();
  CurvatureStack st = compute_stack(bg, MetricAnsatz::zero(kOrder), STACK_WEYL | STACK_COTTON);
  st.einstein.for_each_canonical([&](const Word& w) { CHECK(st.einstein.component(w).is_zero()); });
  st.weyl_asd.for_each_canonical([&](const Word& w) { CHECK(st.weyl_asd.component(w).is_zero()); });
  st.cotton.for_each_canonical([&](const Word& w) { CHECK(st.cotton.component(w).is_zero()); });
  CHECK((st.scal - JetSeries::constant(kOrder, FieldValue::ratio(-6))).is_zero());
  CHECK((st.vol - JetSeries::constant(kOrder, FieldValue::ratio(2))).is_zero());
}

TEST_CASE("difference tensor table holds exactly at phi = 0 and mod negligible terms") {
  std::mt19937 rng(101);
  const Word table_words[25] = {
      Word{IDX_INF, IDX_INF, IDX_INF},  Word{IDX_INF, IDX_ZERO, IDX_INF}, Word{IDX_INF, IDX_ONE, IDX_INF},
      Word{IDX_ZERO, IDX_ZERO, IDX_INF}, Word{IDX_ZERO, IDX_ONE, IDX_INF}, Word{IDX_ONE, IDX_BAR, IDX_INF},
      Word{IDX_ONE, IDX_ONE, IDX_INF},  Word{IDX_INF, IDX_INF, IDX_ONE},  Word{IDX_ZERO, IDX_ZERO, IDX_ONE},
      Word{IDX_BAR, IDX_BAR, IDX_ONE},  Word{IDX_INF, IDX_BAR, IDX_ONE},  Word{IDX_ZERO, IDX_BAR, IDX_ONE},
      Word{IDX_INF, IDX_ZERO, IDX_ONE}, Word{IDX_ZERO, IDX_ONE, IDX_ONE}, Word{IDX_ONE, IDX_BAR, IDX_ONE},
      Word{IDX_INF, IDX_ONE, IDX_ONE},  Word{IDX_BAR, IDX_ZERO, IDX_ONE}, Word{IDX_ONE, IDX_ONE, IDX_ONE},
      Word{IDX_INF, IDX_INF, IDX_ZERO}, Word{IDX_ZERO, IDX_ZERO, IDX_ZERO}, Word{IDX_ONE, IDX_BAR, IDX_ZERO},
      Word{IDX_ONE, IDX_ONE, IDX_ZERO}, Word{IDX_INF, IDX_ZERO, IDX_ZERO}, Word{IDX_INF, IDX_ONE, IDX_ZERO},
      Word{IDX_ZERO, IDX_ONE, IDX_ZERO}};
  for (const Background& bg : test_backgrounds()) {
    MetricAnsatz zero = MetricAnsatz::zero(kOrder);
    CurvatureStack st0 = compute_stack(bg, zero, STACK_EINSTEIN);
    for (const Word& w : table_words)
      CHECK(vanishes_through(st0.d_up.component(w) - d_table(bg, zero, w), kOrder));
    for (int m = 1; m <= 9; ++m) {
      MetricAnsatz phi = pure_perturbation(m, rng);
      CurvatureStack st = compute_stack(bg, phi, STACK_EINSTEIN);
      for (const Word& w : table_words)
        CHECK(vanishes_through(st.d_up.component(w) - d_table(bg, phi, w), m));
    }
  }
}

TEST_CASE("extended torsion and curvature carry exactly the displayed components") {
  Background bg = test_backgrounds()[3];  // Scal = 1/2, A11 = -i/2
  ThetaTensor tor = extended_torsion(bg, 6);
  CHECK(tor.component(Word{IDX_ONE, IDX_BAR, IDX_ZERO}).at(0).exact_eq(FieldValue::imag_ratio(1)));
  CHECK(tor.component(Word{IDX_BAR, IDX_ONE, IDX_ZERO}).at(0).exact_eq(FieldValue::imag_ratio(-1)));
  CHECK(tor.component(Word{IDX_ZERO, IDX_ONE, IDX_BAR}).at(2).exact_eq(bg.a11));
  CHECK(tor.component(Word{IDX_ZERO, IDX_BAR, IDX_ONE}).at(2).exact_eq(bg.a11.conj()));
  int nonzero = 0;
  tor.for_each_canonical([&](const Word& w) { nonzero += tor.known_zero(w) ? 0 : 1; });
  CHECK(nonzero == 3);  // one orbit for the contact part, two for the torsion part

  ThetaTensor rbar = extended_curvature(bg, 6);
  CHECK(rbar.component(Word{IDX_ONE, IDX_ONE, IDX_ONE, IDX_BAR}).at(2).exact_eq(bg.scal));
  CHECK(rbar.component(Word{IDX_ONE, IDX_ONE, IDX_BAR, IDX_ONE}).at(2).exact_eq(-bg.scal));
  CHECK(rbar.component(Word{IDX_BAR, IDX_BAR, IDX_BAR, IDX_ONE}).at(2).exact_eq(bg.scal));
  // Homogeneous model: the A-derivative entries vanish.
  CHECK(rbar.component(Word{IDX_ONE, IDX_ONE, IDX_ZERO, IDX_ONE}).is_zero());
  // Sanity on a torsion-derivative background is covered through the Einstein
  // table, which feeds on these components.
}

TEST_CASE("difference tensor antisymmetrisation equals the torsion as a series identity") {
  std::mt19937 rng(103);
  for (const Background& bg : test_backgrounds()) {
    MetricAnsatz phi = random_ansatz(rng);
    CurvatureStack st = compute_stack(bg, phi, STACK_EINSTEIN);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
          JetSeries lhs = st.d_up.component(Word{i, j, k}) - st.d_up.component(Word{j, i, k});
          JetSeries rhs = st.tor_up.component(Word{j, i, k});
          CHECK((lhs - rhs).is_zero());
        }
  }
}

TEST_CASE("Einstein tensor table holds exactly at phi = 0 and mod negligible terms") {
  std::mt19937 rng(107);
  const Word ewords[7] = {Word{IDX_INF, IDX_INF}, Word{IDX_INF, IDX_ZERO}, Word{IDX_INF, IDX_ONE},
                          Word{IDX_ZERO, IDX_ZERO}, Word{IDX_ZERO, IDX_ONE}, Word{IDX_ONE, IDX_BAR},
                          Word{IDX_ONE, IDX_ONE}};
  for (const Background& bg : test_backgrounds()) {
    MetricAnsatz zero = MetricAnsatz::zero(kOrder);
    CurvatureStack st0 = compute_stack(bg, zero, STACK_EINSTEIN);
    for (int i = 0; i < 7; ++i)
      CHECK(vanishes_through(st0.einstein.component(ewords[i]) - e_table(bg, zero, i), kOrder));
    for (int m = 1; m <= 9; ++m) {
      MetricAnsatz phi = pure_perturbation(m, rng);
      CurvatureStack st = compute_stack(bg, phi, STACK_EINSTEIN);
      for (int i = 0; i < 7; ++i)
        CHECK(vanishes_through(st.einstein.component(ewords[i]) - e_table(bg, phi, i), m));
    }
  }
}

TEST_CASE("curvature component table holds exactly at phi = 0 and mod negligible terms") {
  std::mt19937 rng(109);
  for (const Background& bg : test_backgrounds()) {
    MetricAnsatz zero = MetricAnsatz::zero(kOrder);
    CurvatureStack st0 = compute_stack(bg, zero, STACK_WEYL);
    for (int i = 0; i < 7; ++i)
      CHECK(vanishes_through(st0.riem_low.component(kRWords[i]) - r_table(bg, zero, i), kOrder));
    for (int m = 1; m <= 9; ++m) {
      MetricAnsatz phi = pure_perturbation(m, rng);
      CurvatureStack st = compute_stack(bg, phi, STACK_WEYL);
      for (int i = 0; i < 7; ++i)
        CHECK(vanishes_through(st.riem_low.component(kRWords[i]) - r_table(bg, phi, i), m));
    }
  }
}

TEST_CASE("riemann tensor has the pair and antisymmetry structure") {
  std::mt19937 rng(211);
  Background bg = test_backgrounds()[3];
  MetricAnsatz phi = random_ansatz(rng);
  CurvatureStack st = compute_stack(bg, phi, STACK_WEYL);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          JetSeries r = st.riem_low.component(Word{i, j, k, l});
          CHECK((r + st.riem_low.component(Word{i, j, l, k})).is_zero());
          CHECK((r + st.riem_low.component(Word{j, i, k, l})).is_zero());
          CHECK((r - st.riem_low.component(Word{k, l, i, j})).is_zero());
        }
}

TEST_CASE("volume tensor: flat value, antisymmetry sign, and mod-negligible expansion") {
  CHECK(eps_sign(Word{IDX_ZERO, IDX_ONE, IDX_BAR, IDX_INF}) == 1);
  CHECK(eps_sign(Word{IDX_ONE, IDX_ZERO, IDX_BAR, IDX_INF}) == -1);
  CHECK(eps_sign(Word{IDX_ZERO, IDX_ONE, IDX_BAR, IDX_BAR}) == 0);
  std::mt19937 rng(113);
  Background bg = Background::heisenberg();
  for (int m = 1; m <= 9; ++m) {
    MetricAnsatz phi = pure_perturbation(m, rng);
    CurvatureStack st = compute_stack(bg, phi, STACK_WEYL);
    // eps_{0 1 1bar inf} = i vol with vol = 2 + phi00 + 2 phi11b mod negligible
    JetSeries expect = JetSeries::constant(kOrder, FieldValue::ratio(2)) + phi.phi00 +
                       phi.phi11b.scaled(FieldValue::ratio(2));
    CHECK(vanishes_through(st.vol - expect, m));
  }
}

TEST_CASE("variation formulas for Einstein and Weyl components hold exactly") {
  std::mt19937 rng(127);
  for (const Background& bg : test_backgrounds()) {
    for (int m = 1; m <= 9; ++m) {
      FieldValue p00 = rnd_rat(rng, true), p11b = rnd_rat(rng, true), p01 = rnd_rat(rng), p11 = rnd_rat(rng);
      VariationDeltas d = variation_probe(bg, MetricAnsatz::zero(kOrder), m, p00, p11b, p01, p11);
      VariationCoeffs vc = variation_matrix(m);
      auto R = [&](const mpq_class& q) { return FieldValue::constant(Scalar::exact(q)); };
      CHECK((d.e_infinf - (R(vc.e_infinf_00) * p00 + R(vc.e_infinf_11b) * p11b)).is_zero());
      CHECK(d.e_inf0.is_zero());
      CHECK((d.e_inf1 - FieldValue::constant(Scalar::exact(vc.e_inf1_01)) * p01).is_zero());
      CHECK((d.e_00 - (R(vc.e_00_00) * p00 + R(vc.e_00_11b) * p11b)).is_zero());
      CHECK((d.e_01 - R(vc.e_01_01) * p01).is_zero());
      CHECK((d.e_11b - (R(vc.e_11b_00) * p00 + R(vc.e_11b_11b) * p11b)).is_zero());
      CHECK((d.e_11 - R(vc.e_11_11) * p11).is_zero());
      CHECK((d.w_inf1inf1 - R(vc.w1_11) * p11).is_zero());
      CHECK((d.w_inf0inf0 - (R(vc.w0_00) * p00 + R(vc.w0_11b) * p11b)).is_zero());
    }
  }
}

TEST_CASE("block determinant of the diagonal system matches the closed form") {
  for (int m = 1; m <= 12; ++m) {
    VariationCoeffs vc = variation_matrix(m);
    mpq_class det = vc.e_00_00 * vc.e_11b_11b - vc.e_00_11b * vc.e_11b_00;
    CHECK(det == vc.det_00_11b);
    mpq_class M(m);
    CHECK(vc.det_00_11b == M * (M + 2) * (M - 6) * (M - 8) / 64);
  }
  CHECK(variation_matrix(2).det_00_11b == 3);
  CHECK(variation_matrix(6).det_00_11b == 0);
  CHECK(variation_matrix(8).det_00_11b == 0);
  CHECK(variation_matrix(4).e_11_11 == 0);
  CHECK(variation_matrix(4).w1_11 == 1);
}

TEST_CASE("self-dual trace identities at leading order under pure perturbations") {
  std::mt19937 rng(131);
  Background bg = Background::heisenberg();
  for (int m = 1; m <= 7; ++m) {
    MetricAnsatz phi = pure_perturbation(m, rng);
    CurvatureStack st = compute_stack(bg, phi, STACK_WEYL);
    auto at_m = [&](const Word& w) { return st.weyl_asd.component(w).at(m); };
    FieldValue w00 = at_m(Word{IDX_INF, IDX_ZERO, IDX_INF, IDX_ZERO});
    FieldValue w1b = at_m(Word{IDX_INF, IDX_ONE, IDX_INF, IDX_BAR});
    FieldValue wb1 = at_m(Word{IDX_INF, IDX_BAR, IDX_INF, IDX_ONE});
    CHECK((w00 + w1b + wb1).max_abs() == 0.0);
    CHECK((w00 + FieldValue::ratio(2) * w1b).max_abs() == 0.0);
    for (const Word& ij : {Word{IDX_INF, IDX_ONE}, Word{IDX_INF, IDX_ZERO}, Word{IDX_ONE, IDX_BAR}}) {
      FieldValue lhs01 = at_m(Word{ij.a[0], ij.a[1], IDX_ZERO, IDX_ONE});
      FieldValue rhs01 = FieldValue::imag_ratio(-1, 2) * at_m(Word{ij.a[0], ij.a[1], IDX_ONE, IDX_INF});
      CHECK((lhs01 - rhs01).max_abs() == 0.0);
      FieldValue lhs11 = at_m(Word{ij.a[0], ij.a[1], IDX_ONE, IDX_BAR});
      FieldValue rhs11 = FieldValue::imag_ratio(-1, 2) * at_m(Word{ij.a[0], ij.a[1], IDX_ZERO, IDX_INF});
      CHECK((lhs11 - rhs11).max_abs() == 0.0);
    }
  }
}

TEST_CASE("anti-self-duality holds as an exact series identity") {
  std::mt19937 rng(137);
  Background bg = test_backgrounds()[1];
  MetricAnsatz phi = random_ansatz(rng);
  CurvatureStack st = compute_stack(bg, phi, STACK_WEYL);
  ThetaTensor dual = st.half_eps_contract(st.weyl_asd);
  st.weyl_asd.for_each_canonical(
      [&](const Word& w) { CHECK((dual.component(w) + st.weyl_asd.component(w)).is_zero()); });
}

TEST_CASE("divergence identities of the anti-self-dual Weyl tensor at leading order") {
  std::mt19937 rng(139);
  Background bg = Background::heisenberg();
  for (int m = 1; m <= 7; ++m) {
    MetricAnsatz phi = pure_perturbation(m, rng);
    CurvatureStack st = compute_stack(bg, phi, STACK_WEYL | STACK_COTTON | STACK_DIV_WEYL);
    auto div_at = [&](const Word& w) { return st.div_weyl_asd.component(w).at(m); };
    auto w_at = [&](const Word& w) { return st.weyl_asd.component(w).at(m); };
    auto R = [&](long p, long q) { return FieldValue::ratio(p, q); };
    CHECK((div_at(Word{IDX_ONE, IDX_INF, IDX_ONE}) -
           R(m - 4, 4) * w_at(Word{IDX_INF, IDX_ONE, IDX_INF, IDX_ONE})).max_abs() == 0.0);
    CHECK((div_at(Word{IDX_ZERO, IDX_INF, IDX_ZERO}) -
           R(m - 6, 4) * w_at(Word{IDX_INF, IDX_ZERO, IDX_INF, IDX_ZERO})).max_abs() == 0.0);
    CHECK((div_at(Word{IDX_ZERO, IDX_INF, IDX_ONE}) -
           R(m - 6, 4) * w_at(Word{IDX_INF, IDX_ZERO, IDX_INF, IDX_ONE})).max_abs() == 0.0);
    CHECK((div_at(Word{IDX_ONE, IDX_INF, IDX_ZERO}) -
           R(m - 5, 4) * w_at(Word{IDX_INF, IDX_ONE, IDX_INF, IDX_ZERO})).max_abs() == 0.0);
    CHECK((div_at(Word{IDX_INF, IDX_INF, IDX_ONE}) -
           FieldValue::imag_ratio(1, 2) * w_at(Word{IDX_INF, IDX_ZERO, IDX_INF, IDX_ONE})).max_abs() == 0.0);
    CHECK(div_at(Word{IDX_INF, IDX_INF, IDX_ZERO}).max_abs() == 0.0);
  }
}

TEST_CASE("bianchi relations between Cotton and Einstein components at leading order") {
  // Around the flat model a pure order-m perturbation genuinely satisfies
  // E = O(rho^m); curved backgrounds reach such states only through the
  // solver, whose per-step verification covers them.
  std::mt19937 rng(149);
  {
    const Background bg = Background::heisenberg();
    for (int m : {3, 5, 7, 9}) {
      MetricAnsatz phi = pure_perturbation(m, rng);
      CurvatureStack st = compute_stack(bg, phi, STACK_WEYL | STACK_COTTON);
      auto e_at = [&](const Word& w) { return st.einstein.component(w).at(m); };
      auto c_at = [&](const Word& w) { return st.cotton_asd.component(w).at(m); };
      auto R = [&](long p, long q) { return FieldValue::ratio(p, q); };
      FieldValue b1 = R(m - 8, 1) * e_at(Word{IDX_INF, IDX_INF}) -
                      R(4 * (m - 4), 1) * e_at(Word{IDX_ZERO, IDX_ZERO}) -
                      R(8 * (m - 2), 1) * e_at(Word{IDX_ONE, IDX_BAR});
      CHECK(b1.max_abs() == 0.0);
      CHECK((R(m - 6, 1) * e_at(Word{IDX_INF, IDX_ZERO})).max_abs() == 0.0);
      FieldValue b3 = R(m - 5, 1) * e_at(Word{IDX_INF, IDX_ONE}) -
                      FieldValue::imag_ratio(4) * e_at(Word{IDX_ZERO, IDX_ONE});
      CHECK(b3.max_abs() == 0.0);
      FieldValue c1 = c_at(Word{IDX_ONE, IDX_INF, IDX_ONE}) + R(m - 2, 4) * e_at(Word{IDX_ONE, IDX_ONE});
      CHECK(c1.max_abs() == 0.0);
      FieldValue c2 = c_at(Word{IDX_ZERO, IDX_INF, IDX_ZERO}) + R(5 * m, 24) * e_at(Word{IDX_ZERO, IDX_ZERO}) -
                      R(m - 12, 96) * e_at(Word{IDX_INF, IDX_INF}) - R(m + 6, 12) * e_at(Word{IDX_ONE, IDX_BAR});
      CHECK(c2.max_abs() == 0.0);
      FieldValue c3 = c_at(Word{IDX_INF, IDX_INF, IDX_ZERO}) + R(m - 2, 4) * e_at(Word{IDX_INF, IDX_ZERO});
      CHECK(c3.max_abs() == 0.0);
    }
  }
}
