#pragma once

#include <optional>
#include <vector>

#include "structdae/models.hpp"
#include "structdae/reduce.hpp"

namespace structdae {

/// Fundamental solution of Phi' = M Phi on a grid and its group defect.
struct FlowDiagnostics {
  Certificate certificate;
  double max_defect = 0.0;  // max_k |Phi_k^T B Phi_k - B|_F
  std::vector<Matrix> fundamental;
  TimeGrid grid{std::vector<double>{0.0, 1.0}};
};

struct Trajectory {
  TimeGrid grid{std::vector<double>{0.0, 1.0}};
  std::vector<Vector> states;   // full states
  std::vector<Vector> dynamic;  // reduced states, empty for direct DAE runs
  std::vector<double> hamiltonian;
};

/// Implicit midpoint, (I - h/2 M(t_k + h/2)) Phi_{k+1} = (I + h/2 M(t_k + h/2)) Phi_k, Phi_0 = I.
std::vector<Matrix> fundamental_solution(const MatrixFunction& M, const TimeGrid& grid);
FlowDiagnostics flow_diagnostics(const MatrixFunction& M, const Certificate& cert, const TimeGrid& grid);

double flow_defect(const std::vector<Matrix>& phi, const Certificate& cert);

/// Midpoint integration of z' = M z + Gu u + Gud u' with u an m x 1 function
/// (zero when absent); full states through the state map, H from E.
Trajectory integrate_reduced(const ReducedSystem& sys, const Vector& z0, const TimeGrid& grid,
                             const std::optional<MatrixFunction>& u = std::nullopt);

/// Midpoint integration of E x' = A x + B u directly on the pair. Meant for
/// index-one systems such as the lossy circuit; x0 should be consistent.
Trajectory integrate_dae(const MatrixPair& pair, const Vector& x0, const MatrixFunction& input, const TimeGrid& grid,
                         const std::optional<MatrixFunction>& u = std::nullopt);

std::vector<double> hamiltonian_series(const MatrixFunction& E, const Trajectory& traj);

struct DissipationReport {
  std::vector<double> hamiltonian;
  double max_violation = 0.0;  // max_k H_{k+1} - H_k - tol_k, clipped at 0
  bool ok = true;
  bool strictly_decreasing = false;
};

/// Discrete dissipation inequality H_{k+1} <= H_k + 1e-8 (1 + |H_k|) for an
/// unforced trajectory; a nonzero u is rejected.
DissipationReport dissipation_monitor(const PHDAEModel& model, const Trajectory& traj,
                                      const std::optional<MatrixFunction>& u = std::nullopt);

}  // namespace structdae
