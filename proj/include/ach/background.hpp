#pragma once

#include "ach/field.hpp"

#include <array>
#include <optional>
#include <string>

namespace ach {

/// Finite-jet encoding of a homogeneous background: the base symbols Scal
/// and A11 as constants, with every deeper covariant-derivative entry zero
/// by declaration. Derivatives of derived quantities are generated by the
/// invariant-frame connection (see Background::tw_derivative).
struct JetTable {
  Scalar scal = Scalar::exact(mpq_class(0));
  Scalar a11 = Scalar::exact(mpq_class(0));
  int depth = 4;
};

/// A periodic coordinate chart carrying the contact form and a T^{1,0}
/// generator, both as coordinate components sampled on the grid.
struct ChartSpec {
  GridDims dims;
  std::array<FieldValue, 3> theta;
  std::array<FieldValue, 3> z;
};

struct StructureResiduals {
  double dtheta = 0.0;         // d theta - i theta^1 ^ theta^1bar
  double dtheta1 = 0.0;        // structure equation for d theta^1
  double metric_compat = 0.0;  // omega + conj(omega)
  double scal_imag = 0.0;      // imaginary defect of the curvature scalar
  double max() const { return std::max(std::max(dtheta, dtheta1), std::max(metric_compat, scal_imag)); }
};

/// Pseudo-hermitian package in a unitary admissible frame (h_{1 1bar} = 1):
/// scalar curvature, torsion, connection coefficients, and the derivative
/// dispatch for the directions {0, 1, 1bar}.
class Background {
 public:
  enum class Kind { Constant, Grid };

  Kind kind = Kind::Constant;
  Mode mode = Mode::Exact;

  // Constant kind: invariant-frame model with omega0 = -i * scal.
  // Grid kind: sampled fields; omega1bar = -conj(omega1) by metric
  // compatibility.
  FieldValue scal;
  FieldValue a11;
  FieldValue omega0;
  FieldValue omega1;

  // Grid kind only.
  GeometryPtr geom;
  std::array<FieldValue, 3> frame_T;      // Reeb field, coordinate components
  std::array<FieldValue, 3> frame_Z1;     // unitary T^{1,0} generator
  std::array<FieldValue, 3> coframe_th;   // contact form
  std::array<FieldValue, 3> coframe_th1;  // admissible (1,0) coframe
  FieldValue volume;                      // theta ^ dtheta coordinate density
  bool declared_flat_model = false;       // built-in flat torus operator model

  std::string spec_json;  // provenance: the defining spec document

  static Background heisenberg(Mode mode = Mode::Exact);
  static Background constant_background(Scalar scal, Scalar a11, Mode mode = Mode::Exact);
  static Background from_jet_table(const JetTable& table, Mode mode = Mode::Exact);
  /// Solve the structure equations on the chart; errors on contact or
  /// pseudoconvexity failure at any node, or when the structure residuals
  /// exceed residual_gate after the solve.
  static Background from_chart(const ChartSpec& spec, double tol = 1e-10, double residual_gate = 1e-4);
  /// Flat torus operator model: constant-coefficient frame with declared
  /// Scal = A = 0. Commutators are not those of a contact frame; used for
  /// sublaplacian oracles, not for solving.
  static Background flat_grid(std::array<int, 3> n);

  bool is_grid() const { return kind == Kind::Grid; }
  double float_tol() const { return mode == Mode::Exact ? 0.0 : 1e-13; }

  /// Directional frame derivative of a scalar sample field (no connection
  /// term): dir 0 -> Reeb, 1 -> Z_1, 2 -> Z_1bar.
  FieldValue frame_derivative(int dir, const FieldValue& f) const;

  /// Tanaka-Webster covariant derivative of a tensor component with the
  /// given U(1) charge, in direction dir in {0, 1, 2=1bar}.
  FieldValue tw_derivative(const FieldValue& f, int charge, int dir) const;

  FieldValue omega_dir(int dir) const {
    if (dir == 0) return omega0;
    if (dir == 1) return omega1;
    return -(omega1.conj());
  }

  /// Cartan tensor Q_11 of the pseudo-hermitian structure.
  FieldValue cartan_tensor() const;
  /// Obstruction density; in float mode *imag_defect reports the deviation
  /// from realness if requested.
  FieldValue obstruction_density(double* imag_defect = nullptr) const;

  StructureResiduals structure_residuals() const;

  /// Max-norm residual of the Ricci/torsion commutation identities on probe
  /// fields; large values flag an inconsistent background.
  double consistency_residual() const;
};

/// Standard contact torus chart theta = e^{upsilon} (cos t dx + sin t dy)
/// with upsilon = eps * (analytic low-frequency profile); eps = 0 gives the
/// homogeneous structure with Scal = 1/2, A11 = -i/2.
ChartSpec torus_chart(std::array<int, 3> n, double eps);

}  // namespace ach
