#pragma once

#include <string>
#include <vector>

#include "structdae/canonical.hpp"
#include "structdae/matfun.hpp"

namespace structdae {

enum class CertificateKind { Symplectic, IndefiniteOrthogonal, Orthogonal };
const char* to_string(CertificateKind k) noexcept;

/// Lie-algebra membership claim M^T B + B M = 0 with B = J, S or I.
struct Certificate {
  CertificateKind kind = CertificateKind::Orthogonal;
  Matrix B;

  static Certificate symplectic(Matrix j) { return {CertificateKind::Symplectic, std::move(j)}; }
  static Certificate indefinite_orthogonal(Matrix s) { return {CertificateKind::IndefiniteOrthogonal, std::move(s)}; }
  static Certificate orthogonal(Eigen::Index n) { return {CertificateKind::Orthogonal, Matrix::Identity(n, n)}; }
};

/// max over the grid of |M^T B + B M|_F.
double lie_defect(const MatrixFunction& m, const Certificate& c, const TimeGrid& grid);

/// y(t) = X(t) z + F0(t) u + F1(t) u' for dynamic variables z and input u.
struct AffineMap {
  std::string name;
  MatrixFunction X, F0, F1;
  int derivative_order = 0;  // highest derivative of u used
};

/// The dynamic core z' = M(t) z + Gu(t) u + Gud(t) u' of a structured DAE
/// E x' = A x + B(t) u together with the maps that rebuild the full state.
struct ReducedSystem {
  Eigen::Index dynamic_dim = 0;
  Eigen::Index state_dim = 0;
  Eigen::Index inputs = 0;
  MatrixFunction M;
  MatrixFunction Gu, Gud;
  std::vector<AffineMap> recovery;  // eliminated blocks in transformed coordinates
  AffineMap state;                  // the full original state x
  MatrixFunction projection;        // z = P(t) x for consistent x
  Certificate certificate;
  double lie_defect = 0.0;
  MatrixFunction E;  // of the original pair, for Hamiltonian values
  TimeGrid grid{std::vector<double>{0.0, 1.0}};

  /// Highest input derivative referenced by any map (never above 1).
  int max_derivative_order() const;
  /// Full state from z, u and u' at time t.
  Vector reconstruct(double t, const Vector& z, const Vector& u, const Vector& udot) const;
};

/// Skew-adjoint pair with pointwise positive semidefinite E and index at most
/// two; `input` is the n x m map B(t) of the inhomogeneity B(t) u(t).
ReducedSystem semidefinite_skew_reduce(const MatrixPair& pair, const MatrixFunction& input, const TimeGrid& grid);

/// [M 0; 0 0] [v; p]' = [J(t), -B; B^T, 0] [v; p] + [f(t) u; 0].
ReducedSystem stokes_reduce(const Matrix& M, const Matrix& B, const MatrixFunction& J, const MatrixFunction& f,
                            const TimeGrid& grid);

/// x' = J^{-1} C x from the global form (C = diag(0, A22)) or from a refined
/// self-adjoint local layout (J = Delta, C = Sigma11).
ReducedSystem self_adjoint_dynamic_extract(const SelfAdjointGlobalForm& form, const TimeGrid& grid);
ReducedSystem self_adjoint_dynamic_extract(const LocalFormBlocks& blocks, const TimeGrid& grid);
/// x' = S^{-1} J x from a refined skew-adjoint local layout.
ReducedSystem skew_adjoint_dynamic_extract(const LocalFormBlocks& blocks, const TimeGrid& grid);

}  // namespace structdae
