#pragma once

#include "ach/solver.hpp"

namespace ach {

/// Pieces of the Laplacian of a solved metric needed to apply it to
/// rho-power-shifted scalar series.
struct LaplacianContext {
  const Background* bg = nullptr;
  int order = 0;
  ThetaTensor ginv;
  ThetaTensor d_up;
};

LaplacianContext make_laplacian_context(const Background& bg, const MetricAnsatz& phi);

/// (Delta + k^2/4 - 1) applied to rho^{shift} * F with the overall power
/// stripped: entry l of the result is the rho^{shift + l} coefficient.
JetSeries laplacian_bracket(const LaplacianContext& ctx, int shift, const JetSeries& f, const mpq_class& eig);

/// Single-level probe: the bracket of rho^{-k+2+j} * field.
JetSeries laplacian_shifted_apply(const Background& bg, const SolveResult& src, int k, int j,
                                  const FieldValue& field);

/// (-1)^{k+1} k! (k-1)! / 2, the log-coefficient normalisation.
mpq_class gjms_normalization(int k);

struct GjmsOutput {
  FieldValue pf;
  std::vector<FieldValue> recursion;  // f^(0) .. f^(2k-1)
  std::vector<mpq_class> indicial_factors;  // 4/(j(j-2k)) for j = 1..2k-1
};

/// CR GJMS operator P_{2k} applied to f through the log coefficient of the
/// eigenvalue recursion on the solved metric.
GjmsOutput gjms_apply(const Background& bg, const SolveResult& src, int k, const FieldValue& f);

/// L^2(theta ^ dtheta) pairing matrix M_ij = <P_{2k} b_j, b_i> on a grid
/// background.
std::vector<std::vector<cplx>> gjms_matrix(const Background& bg, const SolveResult& src, int k,
                                           const std::vector<FieldValue>& basis);

/// Sublaplacian on functions: -(D_1 D_1bar + D_1bar D_1) in the unitary
/// frame. Independent oracle for P_2 and for principal-part probes.
FieldValue sublaplacian(const Background& bg, const FieldValue& f);

/// L^2 pairing <u, v> with the fixed-scale volume theta ^ dtheta.
cplx l2_pairing(const Background& bg, const FieldValue& u, const FieldValue& v);

}  // namespace ach
