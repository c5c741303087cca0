#include "structdae/canonical.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "structdae/factor.hpp"
#include "structdae/linalg.hpp"

namespace structdae {

namespace {

using Index = Eigen::Index;

std::string at(double t) {
  std::ostringstream os;
  os.precision(17);
  os << "at t = " << t;
  return os.str();
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

template <typename F>
double grid_max(const TimeGrid& grid, F&& f) {
  double m = 0.0;
  for (double t : grid.points()) m = std::max(m, f(t));
  return m;
}

template <typename F>
double grid_min(const TimeGrid& grid, F&& f) {
  double m = std::numeric_limits<double>::infinity();
  for (double t : grid.points()) m = std::min(m, f(t));
  return m;
}

double pair_scale(const MatrixPair& pair, const TimeGrid& grid) {
  return 1.0 + grid_max(grid, [&](double t) { return std::max(pair.E.eval(t).norm(), pair.A.eval(t).norm()); });
}

MatrixFunction fit(const MatrixFunction& f, const TimeGrid& grid) {
  if (f.is_sampled() && !(*f.grid() == grid)) return sample(f, grid);
  return f;
}

// The pair restricted to `grid`, with sampled coefficients resampled there so
// that products with transforms tabulated on `grid` are well defined.
MatrixPair on_grid(const MatrixPair& pair, const TimeGrid& grid) {
  return MatrixPair(fit(pair.E, grid), fit(pair.A, grid), grid);
}

// Transform from a callback returning (Q, Q') at time t. Constant inputs give
// a constant transform evaluated once.
template <typename F>
CongruenceTransform make_transform(const TimeGrid& grid, bool constant, F&& qq) {
  if (constant) {
    auto [q, qd] = qq(grid.t0());
    return {MatrixFunction::constant(q), MatrixFunction::zero(q.rows(), q.cols())};
  }
  MatrixFunction q = tabulate(grid, qq);
  return {q, differentiate(q)};
}

CongruenceTransform constant_transform(const Matrix& q) {
  return {MatrixFunction::constant(q), MatrixFunction::zero(q.rows(), q.cols())};
}

// Records staged checks of the proof pipeline and raises on failure.
struct Stages {
  ResidualRecord& rec;
  const TimeGrid& grid;
  Adjointness kind;

  void structure(const std::string& step, const MatrixPair& p) {
    const double r = adjoint_residual(p, grid, kind).max_residual();
    rec.add_defect(step + ": adjointness residual", r);
    if (r > rec.tolerance)
      fail(ErrorCode::Structure, step + ": adjointness residual " + num(r) + " exceeds " + num(rec.tolerance));
  }

  void pattern(const std::string& step, const std::string& what, double defect) {
    rec.add_defect(step + ": " + what, defect);
    if (defect > rec.tolerance)
      fail(ErrorCode::Internal, step + ": " + what + " defect " + num(defect) + " exceeds " + num(rec.tolerance));
  }
};

void check_basis(const MatrixPair& pair, const SolutionBasis& b) {
  if (b.Phi.rows() != pair.dim() || b.Phi.cols() != b.d || b.Phidot.rows() != b.Phi.rows() ||
      b.Phidot.cols() != b.d || b.d > pair.dim())
    fail(ErrorCode::Dimension, "solution basis does not match the pair dimension");
}

// Step 1: Q = [Phi Phi'] with Phi' the orthonormal completion from a rank
// split of Phi.
CongruenceTransform complete_basis(const SolutionBasis& b, const TimeGrid& grid, Index n) {
  if (b.d == 0) return CongruenceTransform::identity(n);
  MatrixFunction phi = b.Phi, phid = b.Phidot;
  if ((phi.is_sampled() && !(*phi.grid() == grid)) || (phid.is_sampled() && !(*phid.grid() == grid))) {
    phi = tabulate(grid, [&](double t) { return std::pair{b.Phi.eval(t), b.Phidot.eval(t)}; });
    phid = differentiate(phi);
  }
  if (b.d == n) return {phi, phid};
  RankSplit rs = rank_split(phi, grid);
  if (rs.r != b.d) {
    std::ostringstream os;
    os << "step 1 (completion of the solution basis): basis has rank " << rs.r << " instead of " << b.d;
    fail(ErrorCode::Rank, os.str());
  }
  MatrixFunction comp = block(rs.U, 0, b.d, n, n - b.d);
  return {hstack(phi, comp), hstack(phid, differentiate(comp))};
}

// Leading d x d block of E after step 1 is constant; returns its value at t0.
Matrix constant_leading_block(const MatrixPair& p, const TimeGrid& grid, Index d, Stages& st) {
  Matrix e11 = p.E.eval(grid.t0()).topLeftCorner(d, d);
  st.pattern("step 2 (constancy of E11)", "E11(t) - E11(t0)",
             grid_max(grid, [&](double t) { return (p.E.eval(t).topLeftCorner(d, d) - e11).norm(); }));
  return e11;
}

// Orthogonal U with a vanishing leading p x p block of U^T E11 U, for
// constant skew-symmetric E11 of size 2p. Eigenvalue pairs of the real Schur
// form split into (u1, u2) with u1^T E11 u2 > 0; null vectors are shared out
// evenly.
Matrix lagrangian_split(const Matrix& e11) {
  const Index d = e11.rows(), p = d / 2;
  if (d == 0) return e11;
  Eigen::RealSchur<Matrix> schur(e11);
  const Matrix& t = schur.matrixT();
  const Matrix& z = schur.matrixU();
  const double tol = 1e-10 * std::max(1.0, e11.norm());
  std::vector<Index> first, second, nulls;
  for (Index i = 0; i < d;) {
    if (i + 1 < d && std::abs(t(i + 1, i)) > tol) {
      if (t(i, i + 1) > 0) {
        first.push_back(i);
        second.push_back(i + 1);
      } else {
        first.push_back(i + 1);
        second.push_back(i);
      }
      i += 2;
    } else {
      nulls.push_back(i++);
    }
  }
  if (nulls.size() % 2 != 0) fail(ErrorCode::Internal, "step 3 (isotropic split of E11): odd null space");
  const std::size_t half = nulls.size() / 2;
  first.insert(first.end(), nulls.begin(), nulls.begin() + static_cast<std::ptrdiff_t>(half));
  second.insert(second.end(), nulls.begin() + static_cast<std::ptrdiff_t>(half), nulls.end());
  Matrix u(d, d);
  for (Index k = 0; k < p; ++k) {
    u.col(k) = z.col(first[static_cast<std::size_t>(k)]);
    u.col(p + k) = z.col(second[static_cast<std::size_t>(k)]);
  }
  return u;
}

MatrixFunction layout_self_E(Index p, const MatrixFunction& e33) {
  return block_diag(MatrixFunction::constant(symplectic_unit(p)), e33);
}

MatrixFunction layout_self_A(Index p, const SelfAdjointGlobalForm& f) {
  MatrixFunction lower = vstack(hstack(f.A22, f.A23), hstack(f.A32, f.A33));
  return block_diag(MatrixFunction::zero(p, p), lower);
}

Matrix signature(Index p, Index q) {
  Vector s(p + q);
  s.head(p).setOnes();
  s.tail(q).setConstant(-1.0);
  return s.asDiagonal();
}

void check_algebraic_block(ResidualRecord& rec, const TimeGrid& grid, const MatrixFunction& e33,
                           const MatrixFunction& a33) {
  const Index a = e33.rows();
  if (a == 0) return;
  const double rc = grid_min(grid, [&](double t) { return linalg::inverse_condition(a33.eval(t)); });
  rec.add_measure("A33 inverse condition", rc, rc > 1e-12);
  // For constant blocks the third subsystem is uniquely solvable exactly when
  // A33 is nonsingular and A33^{-1} E33 is nilpotent.
  if (rc > 1e-12 && e33.is_constant() && a33.is_constant()) {
    Matrix n = linalg::solve(a33.constant_value(), e33.constant_value(), "A33");
    Matrix pw = Matrix::Identity(a, a);
    for (Index k = 0; k < a; ++k) pw = pw * n;
    const double v = pw.norm();
    rec.add_measure("(A33^{-1} E33)^a", v, v <= 1e-8 * std::pow(std::max(1.0, n.norm()), static_cast<double>(a)));
  }
}

}  // namespace

bool ResidualRecord::passes() const {
  return std::all_of(entries.begin(), entries.end(), [](const Entry& e) { return e.ok; });
}

double ResidualRecord::max_defect() const {
  double m = 0.0;
  for (const auto& e : entries)
    if (e.defect) m = std::max(m, e.value);
  return m;
}

const ResidualRecord::Entry* ResidualRecord::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

Matrix symplectic_unit(Index p) {
  Matrix j = Matrix::Zero(2 * p, 2 * p);
  j.topRightCorner(p, p).setIdentity();
  j.bottomLeftCorner(p, p) = -Matrix::Identity(p, p);
  return j;
}

SolutionBasis solution_basis_constant(const MatrixPair& pair, const TimeGrid& grid) {
  if (!pair.is_constant()) fail(ErrorCode::Unsupported, "automatic solution basis needs a constant pair");
  const Matrix& e = pair.E.constant_value();
  const Matrix& a = pair.A.constant_value();
  const Index n = e.rows();
  if (n == 0) return {MatrixFunction::zero(0, 0), MatrixFunction::zero(0, 0), 0};

  static constexpr double shifts[] = {0.5772156649015329, -1.4142135623730951, 2.718281828459045,
                                      -3.141592653589793, 0.3183098861837907,  1.618033988749895};
  double best = -1.0, lambda = 0.0;
  for (double s : shifts) {
    const double rc = linalg::inverse_condition(s * e - a);
    if (rc > best) best = rc, lambda = s;
  }
  if (best <= 1e-11) fail(ErrorCode::Regularity, "pencil lambda E - A is singular: the pair is not regular");
  const Matrix shifted = lambda * e - a;
  const Matrix eh = linalg::solve(shifted, e, "lambda E - A");
  const Matrix ah = linalg::solve(shifted, a, "lambda E - A");

  // range(Eh^k) settles on the finite deflating subspace once k reaches the
  // index; the nilpotent part belongs to the eigenvalue zero of Eh.
  const double rtol = 1e-10 * std::max(1.0, eh.norm());
  Matrix z = Matrix::Identity(n, n);
  for (Index it = 0; it <= n; ++it) {
    Eigen::JacobiSVD<Matrix> svd(eh * z, Eigen::ComputeThinU);
    Index r = 0;
    while (r < svd.singularValues().size() && svd.singularValues()(r) > rtol) ++r;
    Matrix next = svd.matrixU().leftCols(r);
    const bool stable = r == z.cols();
    z = std::move(next);
    if (stable) break;
  }
  const Index d = z.cols();
  if (d == 0) return {MatrixFunction::zero(n, 0), MatrixFunction::zero(n, 0), 0};
  Matrix v = d == n ? Matrix::Identity(n, n) : linalg::procrustes_align(z, Matrix::Identity(n, n).leftCols(d));

  const Matrix t = v.transpose() * eh * v;
  const Matrix md = linalg::solve(t, v.transpose() * ah * v, "finite part of the pencil");
  const double scale = 1.0 + std::max(e.norm(), a.norm());

  SolutionBasis out;
  out.d = d;
  if (md.norm() <= 1e-14 * scale) {
    out.Phi = MatrixFunction::constant(v);
    out.Phidot = MatrixFunction::zero(n, d);
  } else {
    out.Phi = tabulate(grid, [&](double tt) {
      Matrix ex = linalg::expm((tt - grid.t0()) * md);
      return std::pair{Matrix(v * ex), Matrix(v * md * ex)};
    });
    out.Phidot = differentiate(out.Phi);
  }
  for (double tt : grid.points()) {
    Matrix phi = out.Phi.eval(tt);
    const double res = (e * out.Phidot.eval(tt) - a * phi).norm();
    if (res > 1e-8 * scale * std::max(1.0, phi.norm()))
      fail(ErrorCode::Internal, "solution basis residual " + num(res) + " too large " + at(tt));
    if (linalg::inverse_condition(phi) <= 1e-10)
      fail(ErrorCode::Internal, "solution basis loses rank " + at(tt));
  }
  return out;
}

SelfAdjointGlobalForm SelfAdjointGlobalForm::from_blocks(Index p, MatrixFunction e33, MatrixFunction a22,
                                                         MatrixFunction a23, MatrixFunction a32,
                                                         MatrixFunction a33) {
  const Index a = e33.rows();
  if (e33.cols() != a || a22.rows() != p || a22.cols() != p || a23.rows() != p || a23.cols() != a ||
      a32.rows() != a || a32.cols() != p || a33.rows() != a || a33.cols() != a)
    fail(ErrorCode::Dimension, "global form blocks have inconsistent sizes");
  SelfAdjointGlobalForm f;
  f.p = p;
  f.algebraic = a;
  f.E33 = std::move(e33);
  f.A22 = std::move(a22);
  f.A23 = std::move(a23);
  f.A32 = std::move(a32);
  f.A33 = std::move(a33);
  f.Q = CongruenceTransform::identity(2 * p + a);
  return f;
}

MatrixPair SelfAdjointGlobalForm::assembled(const TimeGrid& interval) const {
  return MatrixPair(layout_self_E(p, E33), layout_self_A(p, *this), interval);
}

SkewAdjointGlobalForm SkewAdjointGlobalForm::from_blocks(Index p, Index q, MatrixFunction e33, MatrixFunction a33) {
  const Index a = e33.rows();
  if (p < 0 || q < 0 || e33.cols() != a || a33.rows() != a || a33.cols() != a)
    fail(ErrorCode::Dimension, "global form blocks have inconsistent sizes");
  SkewAdjointGlobalForm f;
  f.p = p;
  f.q = q;
  f.algebraic = a;
  f.E33 = std::move(e33);
  f.A33 = std::move(a33);
  f.Q = CongruenceTransform::identity(p + q + a);
  return f;
}

MatrixPair SkewAdjointGlobalForm::assembled(const TimeGrid& interval) const {
  return MatrixPair(block_diag(MatrixFunction::constant(signature(p, q)), E33),
                    block_diag(MatrixFunction::zero(p + q, p + q), A33), interval);
}

SelfAdjointGlobalForm global_canonical_self(const MatrixPair& input, const SolutionBasis& basis,
                                            const TimeGrid& grid) {
  check_basis(input, basis);
  const MatrixPair pair = on_grid(input, grid);
  const Index n = pair.dim(), d = basis.d;
  const double scale = pair_scale(pair, grid);
  {
    const double r = self_adjoint_residual(pair, grid).max_residual();
    const double tol = 1e-10 * scale;
    if (r > tol) fail(ErrorCode::Structure, "pair is not self-adjoint: residual " + num(r) + " exceeds " + num(tol));
  }
  if (d % 2 != 0) {
    std::ostringstream os;
    os << "solution space dimension d = " << d << " is odd; a self-adjoint pair needs d = 2p";
    fail(ErrorCode::Structure, os.str());
  }
  const Index p = d / 2, a = n - d;

  SelfAdjointGlobalForm form;
  form.p = p;
  form.algebraic = a;
  form.stages.tolerance = 1e-8 * scale;
  Stages st{form.stages, grid, Adjointness::SelfAdjoint};

  // 1. Q1 = [Phi Phi'] annihilates the first block column of A.
  CongruenceTransform q1 = complete_basis(basis, grid, n);
  MatrixPair p1 = apply_congruence(pair, q1);
  st.structure("step 1 (completion of the solution basis)", p1);
  st.pattern("step 1 (completion of the solution basis)", "A(:, 1:d)",
             grid_max(grid, [&](double t) { return p1.A.eval(t).leftCols(d).norm(); }));

  // 2.-3. E11 is constant skew-symmetric; split it by an orthogonal U into an
  // isotropic pair of subspaces.
  Matrix e11 = constant_leading_block(p1, grid, d, st);
  Matrix u3 = Matrix::Identity(n, n);
  u3.topLeftCorner(d, d) = lagrangian_split(e11);
  CongruenceTransform q3 = constant_transform(u3);
  MatrixPair p3 = apply_congruence(p1, q3);
  st.structure("step 3 (isotropic split of E11)", p3);
  st.pattern("step 3 (isotropic split of E11)", "E(1:p, 1:p)",
             grid_max(grid, [&](double t) { return p3.E.eval(t).topLeftCorner(p, p).norm(); }));

  // 4. V = [X^+ N] with X = [E12 E13] normalizes X V = [I_p 0].
  const bool e3_const = p3.E.is_constant();
  Matrix prev_null;
  bool first = true;
  CongruenceTransform q4 = make_transform(grid, e3_const, [&](double t) {
    const Matrix x = p3.E.eval(t).topRightCorner(p, n - p);
    const Matrix xd = p3.E.derivative(t).topRightCorner(p, n - p);
    if (linalg::inverse_condition(x) <= 1e-10)
      fail(ErrorCode::Rank, "step 4 (normalization of [E12 E13]): the block loses rank " + at(t));
    const Matrix g = x * x.transpose();
    const Matrix gi = linalg::inverse(g, "[E12 E13][E12 E13]^T");
    const Matrix xp = x.transpose() * gi;
    const Matrix gd = xd * x.transpose() + x * xd.transpose();
    const Matrix xpd = xd.transpose() * gi - x.transpose() * gi * gd * gi;
    Eigen::HouseholderQR<Matrix> qr(x.transpose());
    Matrix full = qr.householderQ() * Matrix::Identity(n - p, n - p);
    Matrix nul = full.rightCols(a);
    if (a > 0) {
      nul = first ? linalg::procrustes_align(nul, Matrix::Identity(n - p, n - p).rightCols(a))
                  : linalg::procrustes_align(nul, prev_null);
    }
    prev_null = nul;
    first = false;
    const Matrix nuld = -xp * xd * nul;
    Matrix q = Matrix::Identity(n, n), qd = Matrix::Zero(n, n);
    q.bottomRightCorner(n - p, n - p) << xp, nul;
    qd.bottomRightCorner(n - p, n - p) << xpd, nuld;
    return std::pair{q, qd};
  });
  MatrixPair p4 = apply_congruence(p3, q4);
  st.structure("step 4 (normalization of [E12 E13])", p4);
  st.pattern("step 4 (normalization of [E12 E13])", "[E12 E13] - [I 0]", grid_max(grid, [&](double t) {
               Matrix x = p4.E.eval(t).topRightCorner(p, n - p);
               x.leftCols(p) -= Matrix::Identity(p, p);
               return x.norm();
             }));

  // 5. Block triangular congruence [[I, E22/2, E23], [0, I, 0], [0, 0, I]].
  CongruenceTransform q5 = make_transform(grid, p4.E.is_constant(), [&](double t) {
    const Matrix e = p4.E.eval(t), ed = p4.E.derivative(t);
    Matrix q = Matrix::Identity(n, n), qd = Matrix::Zero(n, n);
    q.block(0, p, p, p) = 0.5 * e.block(p, p, p, p);
    q.block(0, 2 * p, p, a) = e.block(p, 2 * p, p, a);
    qd.block(0, p, p, p) = 0.5 * ed.block(p, p, p, p);
    qd.block(0, 2 * p, p, a) = ed.block(p, 2 * p, p, a);
    return std::pair{q, qd};
  });
  MatrixPair p5 = apply_congruence(p4, q5);
  st.structure("step 5 (final block triangular congruence)", p5);

  form.E33 = block(p5.E, d, d, a, a);
  form.A22 = block(p5.A, p, p, p, p);
  form.A23 = block(p5.A, p, d, p, a);
  form.A32 = block(p5.A, d, p, a, p);
  form.A33 = block(p5.A, d, d, a, a);
  const MatrixFunction le = layout_self_E(p, form.E33), la = layout_self_A(p, form);
  st.pattern("step 5 (final block triangular congruence)", "E layout",
             grid_max(grid, [&](double t) { return (p5.E.eval(t) - le.eval(t)).norm(); }));
  st.pattern("step 5 (final block triangular congruence)", "A layout",
             grid_max(grid, [&](double t) { return (p5.A.eval(t) - la.eval(t)).norm(); }));

  form.Q = compose(q1, compose(q3, compose(q4, q5)));
  form.transformed = std::move(p5);
  return form;
}

SkewAdjointGlobalForm global_canonical_skew(const MatrixPair& input, const SolutionBasis& basis,
                                            const TimeGrid& grid) {
  check_basis(input, basis);
  const MatrixPair pair = on_grid(input, grid);
  const Index n = pair.dim(), d = basis.d, a = n - d;
  const double scale = pair_scale(pair, grid);
  {
    const double r = skew_adjoint_residual(pair, grid).max_residual();
    const double tol = 1e-10 * scale;
    if (r > tol) fail(ErrorCode::Structure, "pair is not skew-adjoint: residual " + num(r) + " exceeds " + num(tol));
  }

  SkewAdjointGlobalForm form;
  form.algebraic = a;
  form.stages.tolerance = 1e-8 * scale;
  Stages st{form.stages, grid, Adjointness::SkewAdjoint};

  // 1. Q1 = [Phi Phi'].
  CongruenceTransform q1 = complete_basis(basis, grid, n);
  MatrixPair p1 = apply_congruence(pair, q1);
  st.structure("step 1 (completion of the solution basis)", p1);
  st.pattern("step 1 (completion of the solution basis)", "A(:, 1:d)",
             grid_max(grid, [&](double t) { return p1.A.eval(t).leftCols(d).norm(); }));

  // 2.-3. Constant symmetric E11; Sylvester inertia transform. A zero
  // eigenvalue would leave an r-block, which the dimension count excludes.
  Matrix e11 = constant_leading_block(p1, grid, d, st);
  Matrix w = Matrix::Zero(d, d);
  Index p = 0, q = 0;
  if (d > 0) {
    auto eig = linalg::sym_eig(linalg::sym_part(e11));
    const double big = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
    const Index r = (eig.values.array().abs() <= 1e-8 * big).count();
    form.stages.add_measure("step 3 (inertia of E11): r", static_cast<double>(r), r == 0);
    if (r > 0) {
      std::ostringstream os;
      os << "step 4 (r = 0): E11 has " << r
         << " zero eigenvalue(s); the basis does not span the full solution space (basis deficiency)";
      fail(ErrorCode::Rank, os.str());
    }
    InertiaSplit in = smooth_inertia(MatrixFunction::constant(linalg::sym_part(e11)), grid);
    w = in.W.constant_value();
    p = in.p;
    q = in.q;
  }
  form.p = p;
  form.q = q;
  Matrix u3 = Matrix::Identity(n, n);
  u3.topLeftCorner(d, d) = w;
  MatrixPair p3 = apply_congruence(p1, constant_transform(u3));
  CongruenceTransform q3 = constant_transform(u3);
  st.structure("step 3 (inertia of E11)", p3);
  const Matrix s = signature(p, q);
  st.pattern("step 3 (inertia of E11)", "E11 - diag(I_p, -I_q)",
             grid_max(grid, [&](double t) { return (p3.E.eval(t).topLeftCorner(d, d) - s).norm(); }));

  // 5. [[I, -S E13], [0, I]] clears the coupling blocks.
  CongruenceTransform q5 = make_transform(grid, p3.E.is_constant(), [&](double t) {
    const Matrix e = p3.E.eval(t), ed = p3.E.derivative(t);
    Matrix qm = Matrix::Identity(n, n), qd = Matrix::Zero(n, n);
    qm.topRightCorner(d, a) = -s * e.topRightCorner(d, a);
    qd.topRightCorner(d, a) = -s * ed.topRightCorner(d, a);
    return std::pair{qm, qd};
  });
  MatrixPair p5 = apply_congruence(p3, q5);
  st.structure("step 5 (final block triangular congruence)", p5);

  form.E33 = block(p5.E, d, d, a, a);
  form.A33 = block(p5.A, d, d, a, a);
  const MatrixPair lay = form.assembled(grid);
  st.pattern("step 5 (final block triangular congruence)", "E layout",
             grid_max(grid, [&](double t) { return (p5.E.eval(t) - lay.E.eval(t)).norm(); }));
  st.pattern("step 5 (final block triangular congruence)", "A layout",
             grid_max(grid, [&](double t) { return (p5.A.eval(t) - lay.A.eval(t)).norm(); }));

  form.Q = compose(q1, compose(q3, q5));
  form.transformed = std::move(p5);
  return form;
}

ResidualRecord verify_self_global_form(const SelfAdjointGlobalForm& f, const TimeGrid& grid, double tol) {
  ResidualRecord rec;
  rec.tolerance = tol;
  auto defect = [&](const char* name, auto fn) { rec.add_defect(name, grid_max(grid, fn)); };
  defect("E33 + E33^T", [&](double t) { Matrix e = f.E33.eval(t); return (e + e.transpose()).norm(); });
  defect("A22 - A22^T", [&](double t) { Matrix m = f.A22.eval(t); return (m - m.transpose()).norm(); });
  defect("A32^T - A23", [&](double t) { return (f.A32.eval(t).transpose() - f.A23.eval(t)).norm(); });
  defect("A33^T - A33 - E33'", [&](double t) {
    Matrix m = f.A33.eval(t);
    return (m.transpose() - m - f.E33.derivative(t)).norm();
  });
  if (f.transformed) {
    const MatrixPair lay = f.assembled(grid);
    defect("E layout", [&](double t) { return (f.transformed->E.eval(t) - lay.E.eval(t)).norm(); });
    defect("A layout", [&](double t) { return (f.transformed->A.eval(t) - lay.A.eval(t)).norm(); });
  }
  check_algebraic_block(rec, grid, f.E33, f.A33);
  return rec;
}

ResidualRecord verify_skew_global_form(const SkewAdjointGlobalForm& f, const TimeGrid& grid, double tol) {
  ResidualRecord rec;
  rec.tolerance = tol;
  auto defect = [&](const char* name, auto fn) { rec.add_defect(name, grid_max(grid, fn)); };
  defect("E33 - E33^T", [&](double t) { Matrix e = f.E33.eval(t); return (e - e.transpose()).norm(); });
  defect("A33^T + A33 + E33'", [&](double t) {
    Matrix m = f.A33.eval(t);
    return (m.transpose() + m + f.E33.derivative(t)).norm();
  });
  if (f.transformed) {
    const MatrixPair lay = f.assembled(grid);
    defect("E layout", [&](double t) { return (f.transformed->E.eval(t) - lay.E.eval(t)).norm(); });
    defect("A layout", [&](double t) { return (f.transformed->A.eval(t) - lay.A.eval(t)).norm(); });
  }
  check_algebraic_block(rec, grid, f.E33, f.A33);
  return rec;
}

ResidualRecord verify_local_form(const LocalFormBlocks& b, const TimeGrid& grid, double tol) {
  const Index m = b.Delta.rows(), k = b.Sigma22.rows();
  Index n1 = 0;
  for (Index g : b.gamma_sizes) {
    if (g <= 0) fail(ErrorCode::Dimension, "chain block sizes must be positive");
    n1 += g;
  }
  auto shape = [](const MatrixFunction& f, Index r, Index c) { return f.rows() == r && f.cols() == c; };
  if (!shape(b.Delta, m, m) || !shape(b.Sigma11, m, m) || !shape(b.Sigma12, m, k) || !shape(b.Sigma21, k, m) ||
      !shape(b.Sigma22, k, k) || !shape(b.E14, n1, n1) || !shape(b.E41, n1, n1) || !shape(b.A14, n1, n1) ||
      !shape(b.A41, n1, n1))
    fail(ErrorCode::Dimension, "local form blocks have inconsistent sizes");

  ResidualRecord rec;
  rec.tolerance = tol;
  auto defect = [&](const std::string& name, auto fn) { rec.add_defect(name, grid_max(grid, fn)); };
  auto nonsingular = [&](const std::string& name, const MatrixFunction& f) {
    if (f.rows() == 0) return;
    const double rc = grid_min(grid, [&](double t) { return linalg::inverse_condition(f.eval(t)); });
    rec.add_measure(name + " inverse condition", rc, rc > 1e-12);
  };
  auto zero = [&](const std::string& name, const MatrixFunction& f) {
    defect(name, [&](double t) { return f.eval(t).norm(); });
  };

  const bool self = b.variant == LocalVariant::SelfOrthogonal || b.variant == LocalVariant::SelfRefined;
  const double sg = self ? 1.0 : -1.0;  // A^T = sg (A + E') and E^T = -sg E
  switch (b.variant) {
    case LocalVariant::SelfOrthogonal:
      defect("Delta^T + Delta", [&](double t) { Matrix x = b.Delta.eval(t); return (x.transpose() + x).norm(); });
      defect("Sigma11^T - Sigma11 - Delta'", [&](double t) {
        Matrix x = b.Sigma11.eval(t);
        return (x.transpose() - x - b.Delta.derivative(t)).norm();
      });
      defect("Sigma21^T - Sigma12",
             [&](double t) { return (b.Sigma21.eval(t).transpose() - b.Sigma12.eval(t)).norm(); });
      defect("Sigma22^T - Sigma22", [&](double t) { Matrix x = b.Sigma22.eval(t); return (x.transpose() - x).norm(); });
      nonsingular("Delta", b.Delta);
      break;
    case LocalVariant::SkewOrthogonal:
      defect("Delta^T - Delta", [&](double t) { Matrix x = b.Delta.eval(t); return (x.transpose() - x).norm(); });
      defect("Sigma11^T + Sigma11 + Delta'", [&](double t) {
        Matrix x = b.Sigma11.eval(t);
        return (x.transpose() + x + b.Delta.derivative(t)).norm();
      });
      defect("Sigma21^T + Sigma12",
             [&](double t) { return (b.Sigma21.eval(t).transpose() + b.Sigma12.eval(t)).norm(); });
      defect("Sigma22^T + Sigma22", [&](double t) { Matrix x = b.Sigma22.eval(t); return (x.transpose() + x).norm(); });
      nonsingular("Delta", b.Delta);
      break;
    case LocalVariant::SelfRefined: {
      const Matrix j = m % 2 == 0 ? symplectic_unit(m / 2) : Matrix::Zero(m, m);
      defect("J - [0 I; -I 0]", [&](double t) { return m % 2 ? 1.0 : (b.Delta.eval(t) - j).norm(); });
      defect("C^T - C", [&](double t) { Matrix x = b.Sigma11.eval(t); return (x.transpose() - x).norm(); });
      zero("Sigma12", b.Sigma12);
      zero("Sigma21", b.Sigma21);
      defect("Sigma22^T - Sigma22", [&](double t) { Matrix x = b.Sigma22.eval(t); return (x.transpose() - x).norm(); });
      break;
    }
    case LocalVariant::SkewRefined: {
      const Matrix s0 = b.Delta.eval(grid.t0());
      Index p = 0;
      while (p < m && s0(p, p) > 0) ++p;
      const Matrix s = signature(p, m - p);
      defect("S - diag(I_p, -I_q)", [&](double t) { return (b.Delta.eval(t) - s).norm(); });
      defect("J^T + J", [&](double t) { Matrix x = b.Sigma11.eval(t); return (x.transpose() + x).norm(); });
      zero("Sigma12", b.Sigma12);
      zero("Sigma21", b.Sigma21);
      defect("Sigma22^T + Sigma22", [&](double t) { Matrix x = b.Sigma22.eval(t); return (x.transpose() + x).norm(); });
      break;
    }
  }
  nonsingular("Sigma22", b.Sigma22);

  if (n1 > 0) {
    defect(self ? "A41^T - A14 - E14'" : "A41^T + A14 + E14'", [&](double t) {
      return (b.A41.eval(t).transpose() - sg * (b.A14.eval(t) + b.E14.derivative(t))).norm();
    });
    defect(self ? "E41 + E14^T" : "E41 - E14^T",
           [&](double t) { return (b.E41.eval(t) + sg * b.E14.eval(t).transpose()).norm(); });

    // Block partition: row block i of A14 has the size of Gamma_{w-i}, column
    // block j the size of Gamma_{j+1}; the anti-diagonal i + j = w - 1 holds
    // the Gammas.
    const Index w = static_cast<Index>(b.gamma_sizes.size());
    std::vector<Index> roff(w + 1, 0), coff(w + 1, 0);
    for (Index i = 0; i < w; ++i) {
      roff[i + 1] = roff[i] + b.gamma_sizes[static_cast<std::size_t>(w - 1 - i)];
      coff[i + 1] = coff[i] + b.gamma_sizes[static_cast<std::size_t>(i)];
    }
    const bool refined = b.variant == LocalVariant::SelfRefined || b.variant == LocalVariant::SkewRefined;
    defect("E14 anti-triangular pattern", [&](double t) {
      Matrix e = b.E14.eval(t);
      double s = 0.0;
      for (Index i = 0; i < w; ++i)
        for (Index j = w - 1 - i; j < w; ++j)
          s += e.block(roff[i], coff[j], roff[i + 1] - roff[i], coff[j + 1] - coff[j]).squaredNorm();
      return std::sqrt(s);
    });
    defect("A14 anti-triangular pattern", [&](double t) {
      Matrix x = b.A14.eval(t);
      double s = 0.0;
      for (Index i = 0; i < w; ++i)
        for (Index j = w - i; j < w; ++j)
          s += x.block(roff[i], coff[j], roff[i + 1] - roff[i], coff[j + 1] - coff[j]).squaredNorm();
      return std::sqrt(s);
    });
    for (Index j = 0; j < w; ++j) {
      const Index i = w - 1 - j, g = coff[j + 1] - coff[j];
      const std::string name = "Gamma_" + std::to_string(j + 1);
      MatrixFunction gam = block(b.A14, roff[i], coff[j], g, g);
      if (refined)
        defect(name + " - I", [&](double t) { return (gam.eval(t) - Matrix::Identity(g, g)).norm(); });
      else
        nonsingular(name, gam);
    }
  }
  return rec;
}

}  // namespace structdae
