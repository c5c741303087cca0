#include "structdae/reduce.hpp"

#include <map>
#include <sstream>

#include "structdae/factor.hpp"
#include "structdae/linalg.hpp"
#include "structdae/structure.hpp"

namespace structdae {

namespace {

using Index = Eigen::Index;

std::string at(double t) {
  std::ostringstream os;
  os.precision(17);
  os << "at t = " << t;
  return os.str();
}

MatrixFunction fit(const MatrixFunction& f, const TimeGrid& grid) {
  if (f.is_sampled() && !(*f.grid() == grid)) return sample(f, grid);
  return f;
}

double scale_of(const MatrixPair& pair, const TimeGrid& grid) {
  double s = 0.0;
  for (double t : grid.points()) s = std::max({s, pair.E.eval(t).norm(), pair.A.eval(t).norm()});
  return 1.0 + s;
}

// Node-wise results collected under a name and turned into matrix functions:
// a constant when the pipeline ran at a single point, a cubic spline through
// the node values otherwise.
class Tables {
 public:
  Tables(const TimeGrid& grid, bool constant) : grid_(grid), constant_(constant) {}

  std::vector<double> points() const {
    if (constant_) return {grid_.t0()};
    return {grid_.points().begin(), grid_.points().end()};
  }
  void put(const std::string& key, Matrix m) { data_[key].push_back(std::move(m)); }
  MatrixFunction get(const std::string& key) const {
    const auto& v = data_.at(key);
    if (constant_) return MatrixFunction::constant(v.front());
    return MatrixFunction::sampled(grid_, v, 3);
  }

 private:
  const TimeGrid& grid_;
  bool constant_;
  std::map<std::string, std::vector<Matrix>> data_;
};

int order_of(const MatrixFunction& f1, const TimeGrid& grid) {
  for (double t : grid.points())
    if (f1.eval(t).norm() > 0.0) return 1;
  return 0;
}

AffineMap make_map(std::string name, MatrixFunction x, MatrixFunction f0, MatrixFunction f1, const TimeGrid& grid) {
  const int order = order_of(f1, grid);
  return {std::move(name), std::move(x), std::move(f0), std::move(f1), order};
}

void finish(ReducedSystem& sys, const TimeGrid& grid) {
  sys.lie_defect = lie_defect(sys.M, sys.certificate, grid);
  if (sys.lie_defect > 1e-10 * std::max(1.0, sys.M.eval(grid.t0()).norm()))
    fail(ErrorCode::Internal, "reduced system violates its Lie algebra certificate");
}

Matrix block_rows(const Matrix& m, Index r0, Index n) { return m.middleRows(r0, n); }

}  // namespace

const char* to_string(CertificateKind k) noexcept {
  switch (k) {
    case CertificateKind::Symplectic: return "symplectic";
    case CertificateKind::IndefiniteOrthogonal: return "indefinite-orthogonal";
    case CertificateKind::Orthogonal: return "orthogonal";
  }
  return "unknown";
}

double lie_defect(const MatrixFunction& m, const Certificate& c, const TimeGrid& grid) {
  if (m.rows() != c.B.rows()) fail(ErrorCode::Dimension, "certificate does not match the system size");
  double d = 0.0;
  for (double t : grid.points()) {
    Matrix x = m.eval(t);
    d = std::max(d, (x.transpose() * c.B + c.B * x).norm());
  }
  return d;
}

int ReducedSystem::max_derivative_order() const {
  int o = state.derivative_order;
  for (const auto& r : recovery) o = std::max(o, r.derivative_order);
  return o;
}

Vector ReducedSystem::reconstruct(double t, const Vector& z, const Vector& u, const Vector& udot) const {
  Vector x = state.X.eval(t) * z;
  if (inputs > 0) x += state.F0.eval(t) * u + state.F1.eval(t) * udot;
  return x;
}

ReducedSystem semidefinite_skew_reduce(const MatrixPair& input_pair, const MatrixFunction& input,
                                       const TimeGrid& grid) {
  const MatrixPair pair(fit(input_pair.E, grid), fit(input_pair.A, grid), input_pair.interval);
  const MatrixFunction bfun = fit(input, grid);
  const Index n = pair.dim(), m = bfun.cols();
  if (bfun.rows() != n) fail(ErrorCode::Dimension, "input map must have as many rows as the pair");
  const double scale = scale_of(pair, grid);

  {
    const double res = skew_adjoint_residual(pair, grid).max_residual();
    if (res > 1e-10 * scale) fail(ErrorCode::Structure, "pair is not skew-adjoint");
  }
  for (double t : grid.points()) {
    auto eig = linalg::sym_eig(linalg::sym_part(pair.E.eval(t)));
    if (n > 0 && eig.values(0) < -1e-12 * scale)
      fail(ErrorCode::Structure, "E is not positive semidefinite " + at(t));
  }

  // (1) Q^T E Q = diag(Sigma, 0).
  SymRankSplit sr = sym_rank_split(pair.E, grid);
  const Index r = sr.r, s = n - r;
  CongruenceTransform qt = CongruenceTransform::from(sr.Q);
  // (2) conformal partition of Q^T A Q - Q^T E Q'.
  MatrixPair tp = apply_congruence(pair, qt);

  // (3) split the kernel block A22 into its nonsingular part Sigma22 and the
  // kernel, which couples to the differential part as a multiplier.
  Index k2 = 0;
  MatrixFunction ul = MatrixFunction::identity(s), vr = MatrixFunction::identity(s);
  if (s > 0) {
    RankSplit rs = rank_split(block(tp.A, r, r, s, s), grid);
    k2 = rs.r;
    ul = rs.U;
    vr = rs.V;
  }
  const Index c = s - k2;
  if (c > r) fail(ErrorCode::Regularity, "pair is not regular: more constraints than differential variables");
  MatrixFunction cfun = block(tp.A, 0, r, r, s) * block(vr, 0, k2, s, c);
  for (double t : grid.points()) {
    if (k2 > 0) {
      Matrix sg = ul.eval(t).leftCols(k2).transpose() * tp.A.eval(t).block(r, r, s, s) * vr.eval(t).leftCols(k2);
      if (linalg::inverse_condition(sg) <= 1e-12)
        fail(ErrorCode::Regularity, "algebraic block is numerically singular " + at(t));
    }
    if (c > 0 && linalg::inverse_condition(cfun.eval(t)) <= 1e-12)
      fail(ErrorCode::Regularity, "constraint coupling loses rank (index above two or not regular) " + at(t));
  }
  MatrixFunction ufun = MatrixFunction::identity(r);
  if (c > 0) ufun = row_rank_normalize(cfun, grid).U;

  const bool constant = pair.is_constant() && bfun.is_constant();
  Tables tab(grid, constant);
  const auto pts = tab.points();
  const Index k = r - c;

  struct Node {
    Matrix q, q1, q2, a21, ul1, ul2, vr1, vr2, sg, b1, b2, u, ud, sig, sigd, ahat, bhat1;
  };
  auto node = [&](double t) {
    Node nd;
    nd.q = sr.Q.eval(t);
    nd.q1 = nd.q.leftCols(r);
    nd.q2 = nd.q.rightCols(s);
    const Matrix et = tp.E.eval(t), etd = tp.E.derivative(t), at_ = tp.A.eval(t);
    nd.sig = et.topLeftCorner(r, r);
    nd.sigd = etd.topLeftCorner(r, r);
    const Matrix a11 = at_.topLeftCorner(r, r), a12 = at_.topRightCorner(r, s);
    nd.a21 = at_.bottomLeftCorner(s, r);
    const Matrix a22 = at_.bottomRightCorner(s, s);
    const Matrix b = nd.q.transpose() * bfun.eval(t);
    nd.b1 = b.topRows(r);
    nd.b2 = b.bottomRows(s);
    const Matrix ulv = ul.eval(t), vrv = vr.eval(t);
    nd.ul1 = ulv.leftCols(k2);
    nd.ul2 = ulv.rightCols(c);
    nd.vr1 = vrv.leftCols(k2);
    nd.vr2 = vrv.rightCols(c);
    nd.sg = k2 ? linalg::inverse(nd.ul1.transpose() * a22 * nd.vr1, "Sigma22") : Matrix::Zero(0, 0);
    nd.ahat = a11 - a12 * nd.vr1 * nd.sg * nd.ul1.transpose() * nd.a21;
    nd.bhat1 = nd.b1 - a12 * nd.vr1 * nd.sg * nd.ul1.transpose() * nd.b2;
    nd.u = ufun.eval(t);
    nd.ud = ufun.derivative(t);
    return nd;
  };

  // First pass: eta1 = h u solves the constraint rows.
  Tables htab(grid, constant);
  for (double t : pts) {
    Node nd = node(t);
    Matrix h = Matrix::Zero(c, m);
    if (c > 0) {
      const Matrix d1 = nd.ul2.transpose() * nd.a21 * nd.u.leftCols(c);
      h = -linalg::solve(d1, nd.ul2.transpose() * nd.b2, "constraint block");
    }
    htab.put("h", h);
  }
  const MatrixFunction hfun = htab.get("h");

  // Second pass: dynamic block, Sigma^{1/2} scaling and recovery maps.
  for (double t : pts) {
    Node nd = node(t);
    const Matrix h = hfun.eval(t), hd = hfun.derivative(t);
    const Matrix& u = nd.u;
    const Matrix u1 = u.leftCols(c), u2 = u.rightCols(k);
    const Matrix sp = u.transpose() * nd.sig * u;
    const Matrix spd = nd.ud.transpose() * nd.sig * u + u.transpose() * nd.sigd * u + u.transpose() * nd.sig * nd.ud;
    const Matrix ap = u.transpose() * nd.ahat * u - u.transpose() * nd.sig * nd.ud;
    const Matrix bp = u.transpose() * nd.bhat1;
    const Matrix s11 = sp.topLeftCorner(c, c), s12 = sp.topRightCorner(c, k), s21 = sp.bottomLeftCorner(k, c),
                 s22 = sp.bottomRightCorner(k, k);
    const Matrix ap11 = ap.topLeftCorner(c, c), ap12 = ap.topRightCorner(c, k), ap21 = ap.bottomLeftCorner(k, c),
                 ap22 = ap.bottomRightCorner(k, k);
    const Matrix bp1 = block_rows(bp, 0, c), bp2 = block_rows(bp, c, k);

    const Matrix rt = linalg::spd_sqrt(s22);
    const Matrix ri = linalg::inverse(rt, "Sigma^{1/2}");
    const Matrix rd = linalg::sqrt_derivative(rt, spd.bottomRightCorner(k, k));
    const Matrix s22i = ri * ri;
    const Matrix k2m = s22i * ap22 * ri;
    const Matrix p2u = s22i * (ap21 * h + bp2 - s21 * hd);
    const Matrix p2d = -s22i * s21 * h;

    tab.put("M", rd * ri + ri * ap22 * ri);
    tab.put("Gu", rt * p2u);
    tab.put("Gud", rt * p2d);

    Matrix w2x = Matrix::Zero(c, k), w2f0 = Matrix::Zero(c, m), w2f1 = Matrix::Zero(c, m);
    if (c > 0) {
      const Matrix c1 = (u.transpose() * cfun.eval(t)).topRows(c);
      w2x = linalg::solve(c1, s12 * k2m - ap12 * ri, "C1");
      w2f0 = linalg::solve(c1, s11 * hd + s12 * p2u - ap11 * h - bp1, "C1");
      w2f1 = linalg::solve(c1, s11 * h + s12 * p2d, "C1");
    }
    const Matrix y1x = u2 * ri, y1f0 = u1 * h;
    const Matrix w1x = -nd.sg * nd.ul1.transpose() * nd.a21 * y1x;
    const Matrix w1f0 = -nd.sg * (nd.ul1.transpose() * nd.a21 * y1f0 + nd.ul1.transpose() * nd.b2);
    const Matrix y2x = nd.vr1 * w1x + nd.vr2 * w2x, y2f0 = nd.vr1 * w1f0 + nd.vr2 * w2f0, y2f1 = nd.vr2 * w2f1;

    tab.put("eta1.X", Matrix::Zero(c, k));
    tab.put("eta1.F0", h);
    tab.put("eta1.F1", Matrix::Zero(c, m));
    tab.put("w1.X", w1x);
    tab.put("w1.F0", w1f0);
    tab.put("w1.F1", Matrix::Zero(k2, m));
    tab.put("w2.X", w2x);
    tab.put("w2.F0", w2f0);
    tab.put("w2.F1", w2f1);
    tab.put("x.X", nd.q1 * y1x + nd.q2 * y2x);
    tab.put("x.F0", nd.q1 * y1f0 + nd.q2 * y2f0);
    tab.put("x.F1", nd.q2 * y2f1);
    tab.put("P", rt * u2.transpose() * nd.q1.transpose());
  }

  ReducedSystem sys;
  sys.dynamic_dim = k;
  sys.state_dim = n;
  sys.inputs = m;
  sys.M = tab.get("M");
  sys.Gu = tab.get("Gu");
  sys.Gud = tab.get("Gud");
  auto map = [&](const std::string& key, const std::string& name) {
    return make_map(name, tab.get(key + ".X"), tab.get(key + ".F0"), tab.get(key + ".F1"), grid);
  };
  sys.recovery.push_back(map("eta1", "constrained differential variables"));
  sys.recovery.push_back(map("w1", "index-1 algebraic variables"));
  sys.recovery.push_back(map("w2", "index-2 algebraic variables"));
  sys.state = map("x", "state");
  sys.projection = tab.get("P");
  sys.certificate = Certificate::orthogonal(k);
  sys.E = pair.E;
  sys.grid = grid;
  finish(sys, grid);
  return sys;
}

ReducedSystem stokes_reduce(const Matrix& M, const Matrix& B, const MatrixFunction& J, const MatrixFunction& f,
                            const TimeGrid& grid) {
  const Index nv = M.rows(), np = B.cols(), m = f.cols();
  if (M.cols() != nv || B.rows() != nv || J.rows() != nv || J.cols() != nv || f.rows() != nv)
    fail(ErrorCode::Dimension, "Stokes blocks do not conform");
  if (np > nv) fail(ErrorCode::Rank, "B has more columns than rows");
  const double ms = std::max(1.0, M.norm());
  if ((M - M.transpose()).norm() > 1e-12 * ms) fail(ErrorCode::Structure, "M is not symmetric");
  if (nv > 0 && linalg::sym_eig(M).values(0) <= 1e-12 * ms) fail(ErrorCode::Structure, "M is not positive definite");
  for (double t : grid.points()) {
    Matrix j = J.eval(t);
    if ((j + j.transpose()).norm() > 1e-10 * std::max(1.0, j.norm()))
      fail(ErrorCode::Structure, "J is not skew-symmetric " + at(t));
  }

  // (1) U^T B = [B1; 0]; (2) congruence with diag(U, I).
  RowRankNormalization rn = row_rank_normalize(MatrixFunction::constant(B), grid);
  const Matrix u = rn.U.constant_value(), b1 = rn.B1.constant_value();
  const Index k = nv - np;
  const Matrix mt = u.transpose() * M * u;
  const MatrixFunction jt = MatrixFunction::constant(Matrix(u.transpose())) * J * MatrixFunction::constant(u);
  const MatrixFunction ft = MatrixFunction::constant(Matrix(u.transpose())) * f;

  // (3) v1 = 0, pressure from the first rows, M22 v2' = J22 v2 + f2.
  const Matrix m12 = mt.topRightCorner(np, k), m22 = mt.bottomRightCorner(k, k);
  const Matrix rt = linalg::spd_sqrt(m22), ri = linalg::inverse(rt, "M22^{1/2}");
  const Matrix m22i = ri * ri;
  const MatrixFunction j12 = block(jt, 0, np, np, k), j22 = block(jt, np, np, k, k);
  const MatrixFunction f1 = block(ft, 0, 0, np, m), f2 = block(ft, np, 0, k, m);
  auto cm = [](const Matrix& x) { return MatrixFunction::constant(x); };
  const Matrix b1i = linalg::inverse(b1, "B1");

  ReducedSystem sys;
  sys.dynamic_dim = k;
  sys.state_dim = nv + np;
  sys.inputs = m;
  // (4) z = M22^{1/2} v2.
  sys.M = cm(ri) * j22 * cm(ri);
  sys.Gu = cm(ri) * f2;
  sys.Gud = MatrixFunction::zero(k, m);

  const MatrixFunction vx = cm(Matrix(u.rightCols(k) * ri));
  const MatrixFunction px = cm(b1i) * (j12 - cm(Matrix(m12 * m22i)) * j22) * cm(ri);
  const MatrixFunction pf = cm(b1i) * (f1 - cm(Matrix(m12 * m22i)) * f2);
  const MatrixFunction zv = MatrixFunction::zero(nv, m), zp = MatrixFunction::zero(np, m);
  sys.recovery.push_back(make_map("v1 (constrained velocities)", MatrixFunction::zero(np, k),
                                  MatrixFunction::zero(np, m), MatrixFunction::zero(np, m), grid));
  sys.recovery.push_back(make_map("v (velocity)", vx, zv, zv, grid));
  sys.recovery.push_back(make_map("p (pressure)", px, pf, zp, grid));
  sys.state = make_map("state", vstack(vx, px), vstack(zv, pf), vstack(zv, zp), grid);
  Matrix proj = Matrix::Zero(k, nv + np);
  proj.leftCols(nv) = rt * u.rightCols(k).transpose();
  sys.projection = cm(proj);
  sys.certificate = Certificate::orthogonal(k);
  sys.E = block_diag(cm(M), MatrixFunction::zero(np, np));
  sys.grid = grid;
  finish(sys, grid);
  return sys;
}

namespace {

ReducedSystem plain_extract(MatrixFunction m, Certificate cert, const MatrixFunction& e, const TimeGrid& grid) {
  ReducedSystem sys;
  const Index k = m.rows();
  sys.dynamic_dim = k;
  sys.state_dim = k;
  sys.inputs = 0;
  sys.M = std::move(m);
  sys.Gu = MatrixFunction::zero(k, 0);
  sys.Gud = MatrixFunction::zero(k, 0);
  sys.state = {"state", MatrixFunction::identity(k), MatrixFunction::zero(k, 0), MatrixFunction::zero(k, 0), 0};
  sys.projection = MatrixFunction::identity(k);
  sys.certificate = std::move(cert);
  sys.E = e;
  sys.grid = grid;
  finish(sys, grid);
  return sys;
}

void require_symmetric(const MatrixFunction& c, const TimeGrid& grid, const char* what) {
  for (double t : grid.points()) {
    Matrix x = c.eval(t);
    if ((x - x.transpose()).norm() > 1e-10 * std::max(1.0, x.norm()))
      fail(ErrorCode::Structure, std::string(what) + " is not symmetric " + at(t));
  }
}

}  // namespace

ReducedSystem self_adjoint_dynamic_extract(const SelfAdjointGlobalForm& form, const TimeGrid& grid) {
  const Index p = form.p;
  require_symmetric(form.A22, grid, "A22");
  const Matrix j = symplectic_unit(p);
  const MatrixFunction c = block_diag(MatrixFunction::zero(p, p), form.A22);
  return plain_extract(MatrixFunction::constant(Matrix(-j)) * c, Certificate::symplectic(j),
                       MatrixFunction::constant(j), grid);
}

ReducedSystem self_adjoint_dynamic_extract(const LocalFormBlocks& b, const TimeGrid& grid) {
  if (b.variant != LocalVariant::SelfRefined)
    fail(ErrorCode::InvalidArgument, "dynamic extraction needs the refined self-adjoint layout");
  const Index m = b.Delta.rows();
  if (m % 2 != 0) fail(ErrorCode::Structure, "J-block has odd size");
  const Matrix j = symplectic_unit(m / 2);
  for (double t : grid.points())
    if ((b.Delta.eval(t) - j).norm() > 1e-12) fail(ErrorCode::Structure, "J-block is not [0 I; -I 0] " + at(t));
  require_symmetric(b.Sigma11, grid, "C");
  return plain_extract(MatrixFunction::constant(Matrix(-j)) * b.Sigma11, Certificate::symplectic(j),
                       MatrixFunction::constant(j), grid);
}

ReducedSystem skew_adjoint_dynamic_extract(const LocalFormBlocks& b, const TimeGrid& grid) {
  if (b.variant != LocalVariant::SkewRefined)
    fail(ErrorCode::InvalidArgument, "dynamic extraction needs the refined skew-adjoint layout");
  const Index m = b.Delta.rows();
  const Matrix s = b.Delta.eval(grid.t0());
  Index p = 0;
  while (p < m && s(p, p) > 0) ++p;
  Vector sig(m);
  sig.head(p).setOnes();
  sig.tail(m - p).setConstant(-1.0);
  const Matrix sm = sig.asDiagonal();
  for (double t : grid.points())
    if ((b.Delta.eval(t) - sm).norm() > 1e-12) fail(ErrorCode::Structure, "S-block is not diag(I_p, -I_q) " + at(t));
  for (double t : grid.points()) {
    Matrix x = b.Sigma11.eval(t);
    if ((x + x.transpose()).norm() > 1e-10 * std::max(1.0, x.norm()))
      fail(ErrorCode::Structure, "J is not skew-symmetric " + at(t));
  }
  Certificate cert = (p == 0 || p == m) ? Certificate::orthogonal(m) : Certificate::indefinite_orthogonal(sm);
  return plain_extract(MatrixFunction::constant(sm) * b.Sigma11, cert, MatrixFunction::constant(sm), grid);
}

}  // namespace structdae
