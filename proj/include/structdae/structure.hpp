#pragma once

#include "structdae/matfun.hpp"

namespace structdae {

enum class Adjointness { SelfAdjoint, SkewAdjoint };
const char* to_string(Adjointness a) noexcept;

/// Grid-max Frobenius defects of the two adjointness conditions.
///  self: E + E^T and A^T - A - E'
///  skew: E - E^T and A^T + A + E'
struct StructureReport {
  Adjointness kind_tested;
  double e_residual = 0.0;
  double a_residual = 0.0;
  TimeGrid grid;

  double max_residual() const { return std::max(e_residual, a_residual); }
  bool passes(double tol) const { return max_residual() <= tol; }
};

enum class StructureTag { SelfAdjoint, SkewAdjoint, Both, None };
const char* to_string(StructureTag t) noexcept;

struct Classification {
  StructureTag value;
  double tolerance;
  StructureReport self_report;
  StructureReport skew_report;
};

/// Pointwise nonsingular Q(t) together with its derivative.
struct CongruenceTransform {
  MatrixFunction Q;
  MatrixFunction Qdot;

  /// Qdot taken from Q itself (analytic for constant and polynomial Q,
  /// node derivatives for sampled Q).
  static CongruenceTransform from(MatrixFunction q);
  static CongruenceTransform identity(Eigen::Index n);
  Eigen::Index dim() const { return Q.rows(); }
};

StructureReport self_adjoint_residual(const MatrixPair& pair, const TimeGrid& grid);
StructureReport skew_adjoint_residual(const MatrixPair& pair, const TimeGrid& grid);
StructureReport adjoint_residual(const MatrixPair& pair, const TimeGrid& grid, Adjointness kind);

/// 1e-10 * (1 + max over the grid of |E|_F and |A|_F).
double default_structure_tolerance(const MatrixPair& pair, const TimeGrid& grid);

Classification classify(const MatrixPair& pair, const TimeGrid& grid, double tol);

/// (Q^T E Q, Q^T A Q - Q^T E Q'). Q is checked for nonsingularity on the
/// pair's interval grid.
MatrixPair apply_congruence(const MatrixPair& pair, const CongruenceTransform& t);

/// (P E Q, P A Q - P E Q').
MatrixPair apply_equivalence(const MatrixPair& pair, const MatrixFunction& p, const CongruenceTransform& t);

/// Q = Q1 Q2 with the product-rule derivative.
CongruenceTransform compose(const CongruenceTransform& t1, const CongruenceTransform& t2);

/// Q^{-1} with derivative -Q^{-1} Q' Q^{-1}. Constant transforms stay
/// constant; others are tabulated on `grid`.
CongruenceTransform invert(const CongruenceTransform& t, const TimeGrid& grid);

/// Constant self-adjoint pair with invertible E, A  ->  (A^{-1}, E^{-1}),
/// which is skew-adjoint.
MatrixPair self_to_skew_adjoint(const MatrixPair& pair);

/// Throws Singular naming the first grid time where f is numerically singular
/// (smallest singular value <= 1e-12 * largest).
void require_nonsingular(const MatrixFunction& f, const TimeGrid& grid, const std::string& name);

}  // namespace structdae
