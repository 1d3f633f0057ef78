#include "ach/indicial.hpp"

#include <cmath>

namespace ach {

long indicial_poly(int which, long t) {
  switch (which) {
    case 1: return t * t - 6 * t - 4;
    case 2: return -4 * (t - 2);
    case 3: return -t + 4;
    case 4: return t * t - 6 * t - 8;
    case 5: return (t + 1) * (t - 5);
    case 6: return t * (t - 4);
    default: throw PreconditionError("indicial polynomial index out of range");
  }
}

std::array<std::array<mpz_class, 4>, 4> indicial_matrix(long k) {
  if (k < 0) throw PreconditionError("pencil argument must be non-negative");
  long t = k + 9;
  std::array<std::array<mpz_class, 4>, 4> m{};
  m[0][0] = indicial_poly(1, t);
  m[0][1] = indicial_poly(2, t);
  m[1][0] = indicial_poly(3, t);
  m[1][1] = indicial_poly(4, t);
  m[2][2] = indicial_poly(5, t);
  m[3][3] = indicial_poly(6, t);
  return m;
}

mpz_class indicial_det(long k) {
  auto m = indicial_matrix(k);
  return (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * m[2][2] * m[3][3];
}

mpz_class indicial_det_product(long k) {
  mpz_class p(1);
  for (long f : {k + 1, k + 3, k + 4, k + 5, k + 9, k + 9, k + 10, k + 11}) p *= f;
  return p;
}

DetCheckReport det_product_check(long kmax) {
  if (kmax < 0) throw PreconditionError("kmax must be non-negative");
  DetCheckReport rep;
  rep.kmax = kmax;
  for (long k = 0; k <= kmax; ++k) {
    mpz_class d = indicial_det(k);
    rep.dets.push_back(d.get_str());
    if (d != indicial_det_product(k)) {
      rep.all_equal = false;
      if (rep.first_mismatch < 0) rep.first_mismatch = k;
    }
    if (d == 0) rep.all_nonzero = false;
  }
  return rep;
}

GrowthProbe growth_probe(const SolveResult& res) {
  const int N = res.order;
  if (N < 9) throw PreconditionError("growth probe needs at least order 9");
  GrowthProbe probe;
  probe.norms.resize(N + 1, 0.0);
  for (int k = 0; k <= N; ++k) {
    double v = 0.0;
    v = std::max(v, res.phi.phi00.at(k).max_abs());
    v = std::max(v, res.phi.phi11b.at(k).max_abs());
    v = std::max(v, res.phi.phi01.at(k).max_abs());
    v = std::max(v, res.phi.phi11.at(k).max_abs());
    probe.norms[k] = v;
  }
  // Orders below 6 are structurally constrained; fit the tail only.
  std::vector<std::pair<double, double>> pts;
  for (int j = 6; j <= N; ++j)
    if (probe.norms[j] > 0.0) pts.push_back({double(j), std::log(probe.norms[j])});
  if (pts.size() < 3) {
    probe.terminating = true;
    return probe;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double n = double(pts.size());
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double icept = (sy - slope * sx) / n;
  probe.ratio = std::exp(slope);
  double rss = 0;
  for (auto [x, y] : pts) {
    double e = y - (slope * x + icept);
    rss += e * e;
  }
  probe.log_residual = std::sqrt(rss / n);
  return probe;
}

}  // namespace ach
