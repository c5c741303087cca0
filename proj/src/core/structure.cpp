#include "structdae/structure.hpp"

#include <sstream>

#include "structdae/linalg.hpp"

namespace structdae {

const char* to_string(Adjointness a) noexcept {
  return a == Adjointness::SelfAdjoint ? "self-adjoint" : "skew-adjoint";
}

const char* to_string(StructureTag t) noexcept {
  switch (t) {
    case StructureTag::SelfAdjoint: return "self-adjoint";
    case StructureTag::SkewAdjoint: return "skew-adjoint";
    case StructureTag::Both: return "both";
    case StructureTag::None: return "none";
  }
  return "none";
}

CongruenceTransform CongruenceTransform::from(MatrixFunction q) {
  if (q.rows() != q.cols()) fail(ErrorCode::Dimension, "congruence transform must be square");
  MatrixFunction qd = differentiate(q);
  return {std::move(q), std::move(qd)};
}

CongruenceTransform CongruenceTransform::identity(Eigen::Index n) {
  return {MatrixFunction::identity(n), MatrixFunction::zero(n, n)};
}

namespace {

void check_grid(const MatrixPair& pair, const TimeGrid& grid) {
  if (!grid.within(pair.interval)) fail(ErrorCode::Domain, "check grid lies outside the pair's interval");
}

std::string at_time(double t) {
  std::ostringstream os;
  os.precision(17);
  os << t;
  return os.str();
}

}  // namespace

StructureReport adjoint_residual(const MatrixPair& pair, const TimeGrid& grid, Adjointness kind) {
  check_grid(pair, grid);
  const double s = kind == Adjointness::SelfAdjoint ? 1.0 : -1.0;
  StructureReport rep{kind, 0.0, 0.0, grid};
  for (double t : grid.points()) {
    Matrix e = pair.E.eval(t), a = pair.A.eval(t), ed = pair.E.derivative(t);
    // self: E^T = -E, A^T = A + E';  skew: E^T = E, A^T = -A - E'.
    rep.e_residual = std::max(rep.e_residual, (e.transpose() + s * e).norm());
    rep.a_residual = std::max(rep.a_residual, (a.transpose() - s * (a + ed)).norm());
  }
  return rep;
}

StructureReport self_adjoint_residual(const MatrixPair& pair, const TimeGrid& grid) {
  return adjoint_residual(pair, grid, Adjointness::SelfAdjoint);
}

StructureReport skew_adjoint_residual(const MatrixPair& pair, const TimeGrid& grid) {
  return adjoint_residual(pair, grid, Adjointness::SkewAdjoint);
}

double default_structure_tolerance(const MatrixPair& pair, const TimeGrid& grid) {
  double scale = 0.0;
  for (double t : grid.points()) scale = std::max({scale, pair.E.eval(t).norm(), pair.A.eval(t).norm()});
  return 1e-10 * (1.0 + scale);
}

Classification classify(const MatrixPair& pair, const TimeGrid& grid, double tol) {
  if (!(tol > 0)) fail(ErrorCode::InvalidArgument, "tolerance must be positive");
  auto self = self_adjoint_residual(pair, grid);
  auto skew = skew_adjoint_residual(pair, grid);
  const bool is_self = self.passes(tol), is_skew = skew.passes(tol);
  StructureTag tag = is_self && is_skew ? StructureTag::Both
                     : is_self          ? StructureTag::SelfAdjoint
                     : is_skew          ? StructureTag::SkewAdjoint
                                        : StructureTag::None;
  return {tag, tol, std::move(self), std::move(skew)};
}

void require_nonsingular(const MatrixFunction& f, const TimeGrid& grid, const std::string& name) {
  for (double t : grid.points()) {
    if (linalg::inverse_condition(f.eval(t)) <= 1e-12)
      fail(ErrorCode::Singular, name + " is singular at t = " + at_time(t));
  }
}

MatrixPair apply_congruence(const MatrixPair& pair, const CongruenceTransform& tr) {
  if (tr.Q.rows() != pair.dim() || tr.Qdot.rows() != pair.dim() || tr.Qdot.cols() != tr.Q.cols())
    fail(ErrorCode::Dimension, "congruence transform does not match the pair dimension");
  require_nonsingular(tr.Q, pair.interval, "Q");
  MatrixFunction qt = transpose(tr.Q);
  MatrixFunction qte = qt * pair.E;
  MatrixFunction e2 = qte * tr.Q;
  MatrixFunction a2 = qt * pair.A * tr.Q - qte * tr.Qdot;
  return MatrixPair(std::move(e2), std::move(a2), pair.interval);
}

MatrixPair apply_equivalence(const MatrixPair& pair, const MatrixFunction& p, const CongruenceTransform& tr) {
  if (p.rows() != p.cols() || p.cols() != pair.dim() || tr.Q.rows() != pair.dim())
    fail(ErrorCode::Dimension, "equivalence transform does not match the pair dimension");
  require_nonsingular(p, pair.interval, "P");
  require_nonsingular(tr.Q, pair.interval, "Q");
  MatrixFunction pe = p * pair.E;
  return MatrixPair(pe * tr.Q, p * pair.A * tr.Q - pe * tr.Qdot, pair.interval);
}

CongruenceTransform compose(const CongruenceTransform& t1, const CongruenceTransform& t2) {
  if (t1.Q.cols() != t2.Q.rows()) fail(ErrorCode::Dimension, "cannot compose transforms of different size");
  return {t1.Q * t2.Q, t1.Qdot * t2.Q + t1.Q * t2.Qdot};
}

CongruenceTransform invert(const CongruenceTransform& tr, const TimeGrid& grid) {
  if (tr.Q.is_constant() && tr.Qdot.is_constant() && tr.Qdot.constant_value().isZero(0.0)) {
    Matrix qi = linalg::inverse(tr.Q.constant_value(), "Q");
    return {MatrixFunction::constant(qi), MatrixFunction::zero(qi.rows(), qi.cols())};
  }
  std::vector<Matrix> vi, di, vd, dd;
  for (double t : grid.points()) {
    Matrix qi = linalg::inverse(tr.Q.eval(t), "Q at t = " + at_time(t));
    Matrix qd = tr.Qdot.eval(t);
    Matrix qdd = tr.Qdot.derivative(t);
    Matrix qiqd = qi * qd;
    Matrix inv_dot = -qiqd * qi;
    vi.push_back(qi);
    di.push_back(inv_dot);
    vd.push_back(inv_dot);
    dd.push_back(2.0 * qiqd * qiqd * qi - qi * qdd * qi);
  }
  return {MatrixFunction::hermite(grid, std::move(vi), std::move(di)),
          MatrixFunction::hermite(grid, std::move(vd), std::move(dd))};
}

MatrixPair self_to_skew_adjoint(const MatrixPair& pair) {
  if (!pair.is_constant()) fail(ErrorCode::Unsupported, "conversion requires a constant pair");
  const Matrix& e = pair.E.constant_value();
  const Matrix& a = pair.A.constant_value();
  const double tol = 1e-10 * (1.0 + std::max(e.norm(), a.norm()));
  if ((e + e.transpose()).norm() > tol || (a - a.transpose()).norm() > tol)
    fail(ErrorCode::Structure, "conversion requires a self-adjoint pair");
  Matrix ei = linalg::inverse(e, "E", 1e-13);
  Matrix ai = linalg::inverse(a, "A", 1e-13);
  return MatrixPair(MatrixFunction::constant(ai), MatrixFunction::constant(ei), pair.interval);
}

}  // namespace structdae
