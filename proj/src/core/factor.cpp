#include "structdae/factor.hpp"

#include <sstream>

#include "structdae/linalg.hpp"

namespace structdae {

namespace {

using Index = Eigen::Index;

// The points at which a factorization is computed: one point for constant
// inputs, the whole grid otherwise.
std::vector<double> sweep_points(const MatrixFunction& f, const TimeGrid& grid) {
  if (const TimeGrid* g = f.grid(); g && !grid.within(*g))
    fail(ErrorCode::Domain, "factorization grid lies outside the function's interval");
  if (f.is_constant()) return {grid.t0()};
  return {grid.points().begin(), grid.points().end()};
}

MatrixFunction assemble(std::vector<Matrix> values, const MatrixFunction& source, const TimeGrid& grid) {
  if (source.is_constant()) return MatrixFunction::constant(std::move(values.front()));
  return MatrixFunction::sampled(grid, std::move(values), 3);
}

std::string between(double a, double b) {
  std::ostringstream os;
  os.precision(17);
  os << "between t = " << a << " and t = " << b;
  return os.str();
}

std::string at(double t) {
  std::ostringstream os;
  os.precision(17);
  os << "at t = " << t;
  return os.str();
}

Index numerical_rank(const Vector& s, double gap_tol, double t) {
  const double smax = s.size() ? s(0) : 0.0;
  const double tol = gap_tol > 0 ? gap_tol : 1e-8 * smax;
  Index r = 0;
  while (r < s.size() && s(r) > tol) ++r;
  if (r > 0 && r < s.size() && s(r - 1) - s(r) < tol)
    fail(ErrorCode::Rank, "numerical rank is ill-posed " + at(t) + ": singular value gap below threshold");
  return r;
}

// Aligns a block to the previous point's block, or to the matching identity
// columns at the first point.
Matrix align(const Matrix& block, const Matrix* previous, Index offset) {
  if (block.cols() == 0) return block;
  if (previous) return linalg::procrustes_align(block, *previous);
  Matrix target = Matrix::Identity(block.rows(), block.rows()).middleCols(offset, block.cols());
  return linalg::procrustes_align(block, target);
}

}  // namespace

RankSplit rank_split(const MatrixFunction& f, const TimeGrid& grid, double gap_tol) {
  const auto pts = sweep_points(f, grid);
  const Index m = f.rows(), n = f.cols();
  std::vector<Matrix> us, vs, sigmas;
  Index r = -1;
  Matrix ur, u0, vr, v0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    Matrix x = f.eval(pts[k]);
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Index rk = numerical_rank(svd.singularValues(), gap_tol, pts[k]);
    if (k > 0 && rk != r) {
      std::ostringstream os;
      os << "rank drops from " << r << " to " << rk << " " << between(pts[k - 1], pts[k]);
      fail(ErrorCode::Rank, os.str());
    }
    const bool first = k == 0;
    ur = align(svd.matrixU().leftCols(rk), first ? nullptr : &ur, 0);
    u0 = align(svd.matrixU().rightCols(m - rk), first ? nullptr : &u0, rk);
    vr = align(svd.matrixV().leftCols(rk), first ? nullptr : &vr, 0);
    v0 = align(svd.matrixV().rightCols(n - rk), first ? nullptr : &v0, rk);
    r = rk;
    Matrix u(m, m), v(n, n);
    u << ur, u0;
    v << vr, v0;
    sigmas.push_back(ur.transpose() * x * vr);
    us.push_back(std::move(u));
    vs.push_back(std::move(v));
  }
  return {assemble(std::move(us), f, grid), assemble(std::move(vs), f, grid), assemble(std::move(sigmas), f, grid), r};
}

SymRankSplit sym_rank_split(const MatrixFunction& e, const TimeGrid& grid, double gap_tol) {
  if (e.rows() != e.cols()) fail(ErrorCode::Dimension, "symmetric rank split needs a square matrix");
  const auto pts = sweep_points(e, grid);
  const Index n = e.rows();
  std::vector<Matrix> qs, sigmas;
  Index r = -1;
  Matrix qr, q0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    Matrix x = e.eval(pts[k]);
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Index rk = numerical_rank(svd.singularValues(), gap_tol, pts[k]);
    if (k > 0 && rk != r) {
      std::ostringstream os;
      os << "rank drops from " << r << " to " << rk << " " << between(pts[k - 1], pts[k]);
      fail(ErrorCode::Rank, os.str());
    }
    // kernel E = span V0, kernel E^T = span U0.
    if (rk < n && linalg::subspace_distance(svd.matrixV().rightCols(n - rk), svd.matrixU().rightCols(n - rk)) > 1e-8)
      fail(ErrorCode::Structure, "kernel of E^T differs from kernel of E " + at(pts[k]));
    const bool first = k == 0;
    qr = align(svd.matrixV().leftCols(rk), first ? nullptr : &qr, 0);
    q0 = align(svd.matrixV().rightCols(n - rk), first ? nullptr : &q0, rk);
    r = rk;
    Matrix q(n, n);
    q << qr, q0;
    sigmas.push_back(qr.transpose() * x * qr);
    qs.push_back(std::move(q));
  }
  return {assemble(std::move(qs), e, grid), assemble(std::move(sigmas), e, grid), r};
}

InertiaSplit smooth_inertia(const MatrixFunction& d, const TimeGrid& grid) {
  if (d.rows() != d.cols()) fail(ErrorCode::Dimension, "inertia split needs a square matrix");
  const auto pts = sweep_points(d, grid);
  const Index n = d.rows();
  std::vector<Matrix> ws;
  Index p = -1;
  Matrix zp, zm;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    Matrix x = d.eval(pts[k]);
    if ((x - x.transpose()).norm() > 1e-12 * std::max(1.0, x.norm()))
      fail(ErrorCode::Structure, "matrix is not symmetric " + at(pts[k]));
    auto eig = linalg::sym_eig(x);
    const double scale = n ? eig.values.cwiseAbs().maxCoeff() : 0.0;
    if (n && eig.values.cwiseAbs().minCoeff() <= 1e-12 * scale)
      fail(ErrorCode::Singular, "matrix is numerically singular " + at(pts[k]));
    Index q = 0;
    while (q < n && eig.values(q) < 0) ++q;
    const Index pk = n - q;
    if (k > 0 && pk != p) {
      std::ostringstream os;
      os << "inertia changes from (" << p << ", " << n - p << ") to (" << pk << ", " << q << ") "
         << between(pts[k - 1], pts[k]);
      fail(ErrorCode::Rank, os.str());
    }
    const bool first = k == 0;
    // Ascending order: negative eigenvalues first. Positive block leads in W.
    zp = align(eig.vectors.rightCols(pk), first ? nullptr : &zp, 0);
    zm = align(eig.vectors.leftCols(q), first ? nullptr : &zm, pk);
    p = pk;
    Matrix w(n, n);
    w << zp * linalg::spd_inv_sqrt(zp.transpose() * x * zp), zm * linalg::spd_inv_sqrt(-(zm.transpose() * x * zm));
    ws.push_back(std::move(w));
  }
  return {assemble(std::move(ws), d, grid), p, n - p};
}

RowRankNormalization row_rank_normalize(const MatrixFunction& b, const TimeGrid& grid) {
  const Index m = b.rows(), k = b.cols();
  if (k > m) fail(ErrorCode::Dimension, "row rank normalization needs at least as many rows as columns");
  const auto pts = sweep_points(b, grid);
  std::vector<Matrix> us, b1s;
  Matrix q2;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Matrix x = b.eval(pts[i]);
    Eigen::HouseholderQR<Matrix> qr(x);
    Matrix q = qr.householderQ() * Matrix::Identity(m, m);
    Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    const double scale = std::max(x.norm(), std::numeric_limits<double>::min());
    for (Index j = 0; j < k; ++j) {
      if (std::abs(r(j, j)) <= 1e-12 * scale) fail(ErrorCode::Rank, "matrix loses column rank " + at(pts[i]));
      if (r(j, j) < 0) {
        r.row(j) *= -1.0;
        q.col(j) *= -1.0;
      }
    }
    q2 = align(q.rightCols(m - k), i == 0 ? nullptr : &q2, k);
    Matrix u(m, m);
    u << q.leftCols(k), q2;
    us.push_back(std::move(u));
    b1s.push_back(std::move(r));
  }
  return {assemble(std::move(us), b, grid), assemble(std::move(b1s), b, grid)};
}

}  // namespace structdae
