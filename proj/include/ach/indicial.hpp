#pragma once

#include "ach/solver.hpp"

#include <array>

namespace ach {

/// The six indicial polynomials of the order-9 reformulation of the
/// Einstein system, evaluated at integer arguments.
long indicial_poly(int which, long t);  // which in 1..6

/// 4x4 block pencil at t = k + 9: rows/cols ordered (00, 11bar, 01, 11).
std::array<std::array<mpz_class, 4>, 4> indicial_matrix(long k);

mpz_class indicial_det(long k);

/// (k+1)(k+3)(k+4)(k+5)(k+9)^2(k+10)(k+11)
mpz_class indicial_det_product(long k);

struct DetCheckReport {
  long kmax = 0;
  bool all_equal = true;
  bool all_nonzero = true;
  long first_mismatch = -1;
  std::vector<std::string> dets;  // decimal value per k
};
DetCheckReport det_product_check(long kmax);

struct GrowthProbe {
  std::vector<double> norms;  // per-order sup norms of the metric coefficients
  double ratio = 0.0;         // fitted geometric ratio
  double log_residual = 0.0;  // rms residual of the log-linear fit
  bool terminating = false;   // all fitted orders vanish
};

/// Least-squares fit of log ||g^(j)|| against j over orders >= 6; evidence
/// (never proof) of convergence of the formal series.
GrowthProbe growth_probe(const SolveResult& res);

}  // namespace ach
