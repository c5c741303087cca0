#include "structdae/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace structdae::linalg {

Matrix polar_factor(const Matrix& x) {
  if (x.size() == 0) return Matrix(x.rows(), x.cols());
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

Matrix procrustes_align(const Matrix& z, const Matrix& target) {
  if (z.cols() == 0) return z;
  return z * polar_factor(z.transpose() * target);
}

void sign_normalize(Matrix& z) {
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    Eigen::Index i = 0;
    z.col(j).cwiseAbs().maxCoeff(&i);
    if (z(i, j) < 0) z.col(j) *= -1.0;
  }
}

Matrix orthonormal_complement(const Matrix& z) {
  const Eigen::Index n = z.rows(), k = z.cols();
  if (k == 0) return Matrix::Identity(n, n);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return q.rightCols(n - k);
}

double subspace_distance(const Matrix& z1, const Matrix& z2) {
  if (z1.cols() == 0) return 0.0;
  Matrix r = z1 - z2 * (z2.transpose() * z1);
  Eigen::JacobiSVD<Matrix> svd(r);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

SymEig sym_eig(const Matrix& s) {
  if (s.size() == 0) return {Vector(0), Matrix(0, 0)};
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym_part(s));
  if (es.info() != Eigen::Success) fail(ErrorCode::Internal, "symmetric eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

Matrix spd_sqrt(const Matrix& s) {
  auto e = sym_eig(s);
  if (e.values.size() && e.values(0) <= 0) fail(ErrorCode::Structure, "matrix is not positive definite");
  return e.vectors * e.values.cwiseSqrt().asDiagonal() * e.vectors.transpose();
}

Matrix spd_inv_sqrt(const Matrix& s) {
  auto e = sym_eig(s);
  if (e.values.size() && e.values(0) <= 0) fail(ErrorCode::Structure, "matrix is not positive definite");
  return e.vectors * e.values.cwiseSqrt().cwiseInverse().asDiagonal() * e.vectors.transpose();
}

Matrix sqrt_derivative(const Matrix& r, const Matrix& c) {
  auto e = sym_eig(r);
  Matrix ct = e.vectors.transpose() * c * e.vectors;
  for (Eigen::Index i = 0; i < ct.rows(); ++i)
    for (Eigen::Index j = 0; j < ct.cols(); ++j) ct(i, j) /= e.values(i) + e.values(j);
  return e.vectors * ct * e.vectors.transpose();
}

double inverse_condition(const Matrix& m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

Matrix solve(const Matrix& a, const Matrix& b, const std::string& what, double rcond_min) {
  if (a.rows() != a.cols() || a.rows() != b.rows()) fail(ErrorCode::Dimension, "shape mismatch in linear solve: " + what);
  if (a.rows() == 0) return Matrix(0, b.cols());
  Eigen::PartialPivLU<Matrix> lu(a);
  const double scale = a.cwiseAbs().maxCoeff();
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot > 0.0) || !(lu.rcond() > rcond_min) || !(min_pivot > 1e-300 * scale))
    fail(ErrorCode::Singular, what + " is numerically singular");
  Matrix x = lu.solve(b);
  if (!x.allFinite()) fail(ErrorCode::Singular, what + " is numerically singular");
  return x;
}

Matrix inverse(const Matrix& a, const std::string& what, double rcond_min) {
  return solve(a, Matrix::Identity(a.rows(), a.cols()), what, rcond_min);
}

Matrix expm(const Matrix& m) {
  if (m.size() == 0) return m;
  return m.exp();
}

}  // namespace structdae::linalg
