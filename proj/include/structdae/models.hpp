#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "structdae/matfun.hpp"

namespace structdae {

/// E x' + E K x = (J - R) x + (G - P) u,  y = (G + P)^T x + (S + N) u.
struct PHDAEModel {
  MatrixFunction E, J, R, K;
  MatrixFunction G, P;
  MatrixFunction S, N;

  Eigen::Index dim() const { return E.rows(); }
  Eigen::Index inputs() const { return G.cols(); }
  /// The skew-adjoint pair (E, J - E K).
  MatrixPair lossless_pair(const TimeGrid& interval) const;
  /// The dissipative pair (E, J - R - E K) driven by (G - P) u.
  MatrixPair pair(const TimeGrid& interval) const;
  MatrixFunction input_map() const { return G - P; }
};

struct PHDAECheck {
  double skew_residual = 0.0;           // of (E, J - E K)
  double dissipation_min_eig = 0.0;     // of W = [[R, P], [P^T, S]], minimum over the grid
  double s_symmetry = 0.0;
  double n_skewness = 0.0;
  bool ok = false;
};
PHDAECheck check_phdae(const PHDAEModel& model, const TimeGrid& grid);

struct CircuitParams {
  double L = 1.0, C1 = 1.0, C2 = 1.0;
  double RL = 0.0, RG = 0.0, RR = 0.0;
};

/// RLC circuit with state (I, V1, V2, I_G, I_R) and the generator voltage as input.
PHDAEModel build_circuit(const CircuitParams& p);

/// The circuit pair with states reordered (V1, V2, I, I_G, I_R) by a
/// permutation congruence; the input enters row 4.
struct CircuitCanonical {
  MatrixPair pair;
  Matrix input;       // 5 x 1
  Matrix permutation; // columns e2, e3, e1, e4, e5
};
CircuitCanonical build_circuit_canonical(const CircuitParams& p, const TimeGrid& interval);

/// Discretized Stokes-type blocks:
///   [M 0; 0 0] [v; p]' = [A_S(t) - A_H, -B; B^T, -C] [v; p] + [f; 0].
struct StokesModel {
  Matrix M;              // nv x nv, symmetric positive definite
  Matrix B;              // nv x np, full column rank
  Matrix AH;             // symmetric positive semidefinite
  Matrix C;              // symmetric positive definite, small
  Matrix S0;             // skew seed, A_S(t) = sin(t) S0
  MatrixFunction AS;     // sin(t) S0 on the interval
  std::uint64_t seed = 0;

  Eigen::Index nv() const { return M.rows(); }
  Eigen::Index np() const { return B.cols(); }
  /// Full pair; `damped` includes A_H and C.
  MatrixPair pair(const TimeGrid& interval, bool damped) const;
  /// Maps a velocity forcing f (nv) into the full right-hand side.
  Matrix input_map() const;
};
StokesModel build_stokes(Eigen::Index nv, Eigen::Index np, std::uint64_t seed, const TimeGrid& interval);

/// sin(t) * s0 as a matrix function on `interval` (exact to roundoff).
MatrixFunction sine_times(const Matrix& s0, const TimeGrid& interval);

/// Linear constrained mechanical system M p' = -W q - G^T lambda, q' = p, 0 = G q
/// in its self-adjoint (states q, p, lambda) and skew-adjoint arrangements.
MatrixPair build_multibody_self(const Matrix& M, const Matrix& W, const Matrix& G, const TimeGrid& interval);
MatrixPair build_multibody_skew(const Matrix& M, const Matrix& W, const Matrix& G, const TimeGrid& interval);
struct MultibodyPairs {
  MatrixPair self_form;
  MatrixPair skew_form;
};
MultibodyPairs build_multibody(const Matrix& M, const Matrix& W, const Matrix& G, const TimeGrid& interval);

/// Optimality system of a linear-quadratic control problem with DAE
/// constraint E x' = A x + B u + f, states (lambda, x, u).
struct OptimalControlPair {
  MatrixPair pair;
  Matrix Mf;
};
OptimalControlPair build_optimal_control(const MatrixFunction& E, const MatrixFunction& A, const MatrixFunction& B,
                                         const MatrixFunction& W, const MatrixFunction& S, const MatrixFunction& R,
                                         const Matrix& Mf, const TimeGrid& interval);

/// Self-contained model record shared by the file format, the C API and the CLI.
struct Model {
  std::string type;  // circuit, circuit-canonical, stokes, multibody-self, multibody-skew, ocp, pair
  std::string name;
  MatrixPair pair;
  Matrix input;      // n x m, inhomogeneity f = input * u
  std::optional<PHDAEModel> phdae;
  std::optional<StokesModel> stokes;
  std::map<std::string, double> params;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> state_names;
};

/// Named demo models. Recognized parameters: circuit/circuit-canonical use
/// L, C1, C2, RL, RG, RR; stokes uses nv, np, seed, damped; multibody uses n
/// (M = W = I_n, G = e1^T) and form (0 self, 1 skew); ocp uses none. t0 and tf
/// set the interval (default [0, 1]; circuit default [0, 10]).
Model demo_model(const std::string& name, const std::map<std::string, double>& params);

}  // namespace structdae
