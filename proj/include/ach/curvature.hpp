#pragma once

#include "ach/background.hpp"
#include "ach/theta.hpp"

namespace ach {

/// Deviation of the normal-form metric from the model: g_00 = 1 + phi_00,
/// g_01 = phi_01, g_11 = phi_11, g_11bar = 1 + phi_11bar, all O(rho).
struct MetricAnsatz {
  int order = 0;
  JetSeries phi00, phi11b, phi01, phi11;

  static MetricAnsatz zero(int order) {
    MetricAnsatz m;
    m.order = order;
    m.phi00 = JetSeries(order);
    m.phi11b = JetSeries(order);
    m.phi01 = JetSeries(order);
    m.phi11 = JetSeries(order);
    return m;
  }
  MetricAnsatz truncated(int w) const {
    MetricAnsatz m;
    m.order = w;
    m.phi00 = phi00.truncated(w);
    m.phi11b = phi11b.truncated(w);
    m.phi01 = phi01.truncated(w);
    m.phi11 = phi11.truncated(w);
    return m;
  }
  /// Normal form and reality invariants; throws on violation.
  void check_invariants(double tol) const;
};

ThetaTensor metric_tensor(const MetricAnsatz& m);
ThetaTensor metric_inverse(const ThetaTensor& g, double float_tol);

/// Extended Tanaka-Webster covariant derivative; the direction is prepended
/// as a new lower slot 0.
ThetaTensor extended_cov_derivative(const Background& bg, const ThetaTensor& t);

/// Torsion of the extended connection, slots (I, J, ^K).
ThetaTensor extended_torsion(const Background& bg, int order);

/// Curvature of the extended connection, slots (I, ^J, K, L).
ThetaTensor extended_curvature(const Background& bg, int order);

ThetaTensor raise_slot(const ThetaTensor& t, int slot, const ThetaTensor& ginv);
ThetaTensor lower_slot(const ThetaTensor& t, int slot, const ThetaTensor& g);

/// Difference tensor of the Levi-Civita connection against the extended
/// connection, slots (I, J, K) all lower.
ThetaTensor difference_tensor_low(const Background& bg, const ThetaTensor& g, const ThetaTensor& nabla_g,
                                  const ThetaTensor& tor_low);

/// Levi-Civita covariant derivative of an all-lower tensor (direction
/// prepended), using the difference tensor with raised last slot.
ThetaTensor lc_cov_derivative(const Background& bg, const ThetaTensor& d_up, const ThetaTensor& t);

enum StackFlags : unsigned {
  STACK_EINSTEIN = 0,
  STACK_WEYL = 1,
  STACK_COTTON = 2,
  STACK_DIV_WEYL = 4,
};

/// Exact series evaluation of the full curvature stack of a normal-form
/// metric over the given background.
struct CurvatureStack {
  int order = 0;
  ThetaTensor g, ginv;
  ThetaTensor tor_up, tor_low;
  ThetaTensor d_low, d_up;
  ThetaTensor riem;        // R_I^J_KL
  ThetaTensor riem_low;    // R_IJKL
  ThetaTensor ricci;       // Ric_IJ
  JetSeries scal;
  ThetaTensor einstein;    // Ric + (3/2) g
  ThetaTensor schouten;    // (1/2) Ric - (1/12) scal g
  JetSeries vol;           // |det g|^{1/2}; eps_{0 1 1bar inf} = i vol
  ThetaTensor weyl_low;    // W_IJKL
  ThetaTensor weyl_asd;    // W^-_IJKL
  ThetaTensor cotton;      // C_IJK = nabla_K P_IJ - nabla_J P_IK
  ThetaTensor cotton_asd;  // C^-_IJK
  ThetaTensor div_weyl_asd;  // nabla^I W^-_IJKL, slots (J,K,L)

  /// eps with two raised slots contracted against the last two slots of an
  /// all-lower rank >= 2 tensor: (1/2) eps_{AB}^{PQ} T_{... P Q}.
  ThetaTensor half_eps_contract(const ThetaTensor& t) const;
};

CurvatureStack compute_stack(const Background& bg, const MetricAnsatz& m, unsigned flags);

}  // namespace ach
