#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ach/gjms.hpp"
#include "ach/io.hpp"

#include <random>

using namespace ach;

namespace {

SolveResult flat_grid_solve(const Background& bg, int order) {
  SolveConfig cfg;
  cfg.order = order;
  cfg.lambda = Scalar::flt({0.0, 0.0});
  return solve(bg, cfg);
}

FieldValue random_field(const Background& bg, unsigned seed) {
  return io::parse_test_function("random:" + std::to_string(seed), bg);
}

}  // namespace

TEST_CASE("log-coefficient normalisation constants") {
  CHECK(gjms_normalization(1) == mpq_class(1, 2));
  CHECK(gjms_normalization(2) == -1);
  CHECK(gjms_normalization(3) == 6);
}

TEST_CASE("shifted Laplacian bracket has the indicial leading coefficient") {
  Background bg = Background::flat_grid({8, 8, 8});
  SolveResult res = flat_grid_solve(bg, 9);
  FieldValue f = random_field(bg, 3);
  for (int k : {1, 2})
    for (int j : {0, 1, 2, 3}) {
      JetSeries b = laplacian_shifted_apply(bg, res, k, j, f);
      FieldValue expect = FieldValue::ratio(-j * (j - 2 * k), 4) * f;
      CHECK((b.at(0) - expect).max_abs() < 1e-12);
      if (j == 0) CHECK(b.at(0).max_abs() < 1e-12);
    }
  // Level j = 1 at k = 1: the order-0 coefficient is (1/4) f.
  JetSeries b = laplacian_shifted_apply(bg, res, 1, 1, f);
  CHECK((b.at(0) - FieldValue::ratio(1, 4) * f).max_abs() < 1e-12);
}

TEST_CASE("P_2 equals the sublaplacian on the flat solve") {
  Background bg = Background::flat_grid({8, 8, 8});
  SolveResult res = flat_grid_solve(bg, 9);
  for (unsigned seed = 1; seed <= 5; ++seed) {
    FieldValue f = random_field(bg, seed);
    GjmsOutput out = gjms_apply(bg, res, 1, f);
    FieldValue direct = sublaplacian(bg, f);
    double scale = std::max(1.0, direct.max_abs());
    CHECK((out.pf - direct).max_abs() / scale < 1e-10);
  }
}

TEST_CASE("gjms_apply is linear and annihilates zero") {
  Background bg = Background::flat_grid({8, 8, 8});
  SolveResult res = flat_grid_solve(bg, 9);
  CHECK(gjms_apply(bg, res, 2, FieldValue::zero()).pf.max_abs() == 0.0);
  FieldValue f = random_field(bg, 11), g = random_field(bg, 12);
  FieldValue pf = gjms_apply(bg, res, 2, f).pf;
  FieldValue pg = gjms_apply(bg, res, 2, g).pf;
  FieldValue psum = gjms_apply(bg, res, 2, f + FieldValue::flt({2.0, 0.0}) * g).pf;
  CHECK((psum - pf - FieldValue::flt({2.0, 0.0}) * pg).max_abs() < 1e-9 * std::max(1.0, psum.max_abs()));
}

TEST_CASE("indicial guard: the recursion factors are 4/(j(j-2k))") {
  Background bg = Background::flat_grid({8, 8, 8});
  SolveResult res = flat_grid_solve(bg, 9);
  GjmsOutput out = gjms_apply(bg, res, 2, random_field(bg, 5));
  REQUIRE(out.indicial_factors.size() == 3);
  CHECK(out.indicial_factors[0] == ratq(4, 1 * (1 - 4)));
  CHECK(out.indicial_factors[1] == ratq(4, 2 * (2 - 4)));
  CHECK(out.indicial_factors[2] == ratq(4, 3 * (3 - 4)));
  CHECK(out.recursion.size() == 4);
  CHECK_THROWS_AS(gjms_apply(bg, res, 4, random_field(bg, 6)), PreconditionError);  // depth guard
}

TEST_CASE("principal part dominance at growing contact frequency") {
  Background bg = Background::flat_grid({16, 16, 16});
  SolveResult res = flat_grid_solve(bg, 9);
  // P_4 against Delta_b^2 on pure contact-direction oscillations.
  double prev = 1e9;
  for (int w : {1, 2, 3}) {
    FieldValue f = io::parse_test_function("fourier:" + std::to_string(w) + ",0,0", bg);
    FieldValue p = gjms_apply(bg, res, 2, f).pf;
    FieldValue d2 = sublaplacian(bg, sublaplacian(bg, f));
    double ratio_defect = (p - d2).max_abs() / d2.max_abs();
    CHECK(ratio_defect < prev);
    prev = ratio_defect;
  }
  CHECK(prev < 0.2);
}

TEST_CASE("pairing matrix of P_2 on the flat grid is the sublaplacian matrix and Hermitian") {
  Background bg = Background::flat_grid({8, 8, 8});
  SolveResult res = flat_grid_solve(bg, 9);
  std::vector<FieldValue> basis;
  for (int i = 0; i < 4; ++i) {
    int kx = i % 2, ky = (i / 2) % 2;
    basis.push_back(io::parse_test_function("fourier:" + std::to_string(kx) + "," + std::to_string(ky) + ",0", bg));
  }
  auto m = gjms_matrix(bg, res, 1, basis);
  double herm = 0.0, scale = 0.0, direct = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      herm = std::max(herm, std::abs(m[i][j] - std::conj(m[j][i])));
      scale = std::max(scale, std::abs(m[i][j]));
      cplx want = l2_pairing(bg, sublaplacian(bg, basis[j]), basis[i]);
      direct = std::max(direct, std::abs(m[i][j] - want));
    }
  CHECK(herm / scale < 1e-12);
  CHECK(direct / scale < 1e-12);
  // A zero basis column stays zero.
  auto m2 = gjms_matrix(bg, res, 1, {basis[0], FieldValue::zero()});
  CHECK(std::abs(m2[0][1]) == 0.0);
  CHECK(std::abs(m2[1][1]) == 0.0);
}

TEST_CASE("self-adjointness on a perturbed chart background") {
  Background bg = Background::from_chart(torus_chart({12, 12, 12}, 0.03), 1e-10);
  SolveConfig cfg;
  cfg.order = 9;
  cfg.lambda = Scalar::flt({1.0, 0.0});
  SolveResult res = solve(bg, cfg);
  std::vector<FieldValue> basis;
  for (int i = 0; i < 4; ++i) {
    int kx = i % 2, ky = (i / 2) % 2;
    basis.push_back(io::parse_test_function("fourier:" + std::to_string(kx) + "," + std::to_string(ky) + ",0", bg));
  }
  for (int k : {1, 2}) {
    auto m = gjms_matrix(bg, res, k, basis);
    double herm = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j) {
        herm = std::max(herm, std::abs(m[i][j] - std::conj(m[j][i])));
        scale = std::max(scale, std::abs(m[i][j]));
      }
    CHECK(herm / scale < 1e-8);
  }
}

TEST_CASE("P_2 and P_4 are independent of lambda") {
  // They only consume metric jets below the order where lambda enters.
  Background bg = Background::constant_background(Scalar::exact(ratq(1, 2)),
                                                  Scalar::exact(mpq_class(0), ratq(-1, 2)));
  SolveConfig c0, c2;
  c0.order = c2.order = 9;
  c0.lambda = Scalar::exact(mpq_class(0));
  c2.lambda = Scalar::exact(mpq_class(2));
  SolveResult r0 = solve(bg, c0), r2 = solve(bg, c2);
  FieldValue f = FieldValue::ratio(1);
  for (int k : {1, 2})
    CHECK(gjms_apply(bg, r0, k, f).pf.exact_eq(gjms_apply(bg, r2, k, f).pf));
  // The zeroth-order part of P_2 on constants is the curvature multiple
  // Scal/4 in this normalisation.
  CHECK(gjms_apply(bg, r0, 1, f).pf.exact_eq(FieldValue::ratio(1, 8)));
}

TEST_CASE("exact-mode operator on the homogeneous model") {
  Background bg = Background::constant_background(Scalar::exact(ratq(1, 2)),
                                                  Scalar::exact(mpq_class(0), ratq(-1, 2)));
  SolveConfig cfg;
  cfg.order = 9;
  cfg.lambda = Scalar::exact(mpq_class(0));
  SolveResult res = solve(bg, cfg);
  // Constants are annihilated by the frame derivatives, so P_2 c reduces to
  // the curvature multiple of c; linearity must be exact.
  FieldValue one = FieldValue::ratio(1);
  FieldValue p1 = gjms_apply(bg, res, 1, one).pf;
  FieldValue p3 = gjms_apply(bg, res, 1, FieldValue::ratio(3)).pf;
  CHECK((p3 - FieldValue::ratio(3) * p1).is_zero());
}
