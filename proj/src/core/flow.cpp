#include "structdae/flow.hpp"

#include <cmath>
#include <sstream>

#include "structdae/linalg.hpp"

namespace structdae {

namespace {

using Index = Eigen::Index;

[[noreturn]] void singular_step(double t, double h) {
  std::ostringstream os;
  os.precision(17);
  os << "implicit midpoint step is singular at t = " << t << " (h = " << h << "); refine the grid";
  fail(ErrorCode::Singular, os.str());
}

// One midpoint step for E y' = A y + g with everything frozen at the midpoint.
Matrix midpoint_step(const Matrix& e, const Matrix& a, const Matrix& y, const Matrix& g, double h, double tm) {
  const Matrix lhs = e - 0.5 * h * a;
  Eigen::PartialPivLU<Matrix> lu(lhs);
  if (lhs.size() > 0 && linalg::inverse_condition(lhs) <= 1e-13) singular_step(tm, h);
  const Matrix rhs = (e + 0.5 * h * a) * y + h * g;
  Matrix x = lu.solve(rhs);
  x += lu.solve(rhs - lhs * x);  // one refinement sweep keeps long runs on the invariant
  return x;
}

Vector input_at(const std::optional<MatrixFunction>& u, Index m, double t) {
  if (!u) return Vector::Zero(m);
  return u->eval(t).col(0);
}

Vector input_rate(const std::optional<MatrixFunction>& u, Index m, double t) {
  if (!u) return Vector::Zero(m);
  return u->derivative(t).col(0);
}

void check_input(const std::optional<MatrixFunction>& u, Index m) {
  if (u && (u->rows() != m || u->cols() != 1)) fail(ErrorCode::Dimension, "input must be an m x 1 function");
}

}  // namespace

std::vector<Matrix> fundamental_solution(const MatrixFunction& M, const TimeGrid& grid) {
  if (M.rows() != M.cols()) fail(ErrorCode::Dimension, "M must be square");
  const Index n = M.rows();
  const Matrix id = Matrix::Identity(n, n);
  std::vector<Matrix> phi{id};
  phi.reserve(grid.size());
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double h = grid[k + 1] - grid[k], tm = grid[k] + 0.5 * h;
    phi.push_back(midpoint_step(id, M.eval(tm), phi.back(), Matrix::Zero(n, n), h, tm));
  }
  return phi;
}

double flow_defect(const std::vector<Matrix>& phi, const Certificate& cert) {
  double d = 0.0;
  for (const Matrix& p : phi) d = std::max(d, (p.transpose() * cert.B * p - cert.B).norm());
  return d;
}

FlowDiagnostics flow_diagnostics(const MatrixFunction& M, const Certificate& cert, const TimeGrid& grid) {
  if (cert.B.rows() != M.rows()) fail(ErrorCode::Dimension, "certificate does not match M");
  FlowDiagnostics out;
  out.certificate = cert;
  out.fundamental = fundamental_solution(M, grid);
  out.max_defect = flow_defect(out.fundamental, cert);
  out.grid = grid;
  return out;
}

std::vector<double> hamiltonian_series(const MatrixFunction& E, const Trajectory& traj) {
  std::vector<double> h;
  h.reserve(traj.states.size());
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const Vector& x = traj.states[k];
    if (x.size() != E.rows()) fail(ErrorCode::Dimension, "state size does not match E");
    h.push_back(0.5 * x.dot(E.eval(traj.grid[k]) * x));
  }
  return h;
}

Trajectory integrate_reduced(const ReducedSystem& sys, const Vector& z0, const TimeGrid& grid,
                             const std::optional<MatrixFunction>& u) {
  const Index k = sys.dynamic_dim, m = sys.inputs;
  if (z0.size() != k) fail(ErrorCode::Dimension, "initial value must have the dynamic dimension");
  check_input(u, m);
  const Matrix id = Matrix::Identity(k, k);
  Trajectory tr;
  tr.grid = grid;
  tr.dynamic.push_back(z0);
  for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
    const double h = grid[j + 1] - grid[j], tm = grid[j] + 0.5 * h;
    Vector g = Vector::Zero(k);
    if (m > 0) g = sys.Gu.eval(tm) * input_at(u, m, tm) + sys.Gud.eval(tm) * input_rate(u, m, tm);
    tr.dynamic.push_back(midpoint_step(id, sys.M.eval(tm), tr.dynamic.back(), g, h, tm).col(0));
  }
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double t = grid[j];
    tr.states.push_back(sys.reconstruct(t, tr.dynamic[j], input_at(u, m, t), input_rate(u, m, t)));
  }
  tr.hamiltonian = hamiltonian_series(sys.E, tr);
  return tr;
}

Trajectory integrate_dae(const MatrixPair& pair, const Vector& x0, const MatrixFunction& input, const TimeGrid& grid,
                         const std::optional<MatrixFunction>& u) {
  const Index n = pair.dim(), m = input.cols();
  if (x0.size() != n) fail(ErrorCode::Dimension, "initial value must match the pair");
  if (input.rows() != n) fail(ErrorCode::Dimension, "input map must match the pair");
  check_input(u, m);
  Trajectory tr;
  tr.grid = grid;
  tr.states.push_back(x0);
  for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
    const double h = grid[j + 1] - grid[j], tm = grid[j] + 0.5 * h;
    Vector g = Vector::Zero(n);
    if (m > 0) g = input.eval(tm) * input_at(u, m, tm);
    tr.states.push_back(midpoint_step(pair.E.eval(tm), pair.A.eval(tm), tr.states.back(), g, h, tm).col(0));
  }
  tr.hamiltonian = hamiltonian_series(pair.E, tr);
  return tr;
}

DissipationReport dissipation_monitor(const PHDAEModel& model, const Trajectory& traj,
                                      const std::optional<MatrixFunction>& u) {
  if (u) {
    for (double t : traj.grid.points())
      if (u->eval(t).norm() != 0.0) fail(ErrorCode::InvalidArgument, "dissipation is monitored for u = 0 only");
  }
  DissipationReport r;
  r.hamiltonian = hamiltonian_series(model.E, traj);
  r.strictly_decreasing = r.hamiltonian.size() > 1;
  for (std::size_t k = 0; k + 1 < r.hamiltonian.size(); ++k) {
    const double hk = r.hamiltonian[k], hn = r.hamiltonian[k + 1];
    r.max_violation = std::max(r.max_violation, hn - hk - 1e-8 * (1.0 + std::abs(hk)));
    if (!(hn < hk)) r.strictly_decreasing = false;
  }
  r.ok = r.max_violation <= 0.0;
  return r;
}

}  // namespace structdae
