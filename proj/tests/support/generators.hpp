#pragma once
// Seeded random test data: exactly structured polynomial pairs and
// transforms.

#include <random>
#include <vector>

#include "structdae/matfun.hpp"
#include "structdae/structure.hpp"

namespace testsupport {

using structdae::Matrix;
using structdae::MatrixFunction;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo = -1.0, double hi = 1.0) {
    return lo + (hi - lo) * static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }
  Matrix matrix(Eigen::Index r, Eigen::Index c) {
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) m(i, j) = uniform();
    return m;
  }
  Matrix skew(Eigen::Index n) {
    Matrix m = matrix(n, n);
    return m - m.transpose();
  }
  Matrix sym(Eigen::Index n) {
    Matrix m = matrix(n, n);
    return m + m.transpose();
  }
  /// Well-conditioned: identity plus a small perturbation.
  Matrix near_identity(Eigen::Index n, double scale = 0.3) { return Matrix::Identity(n, n) + scale * matrix(n, n); }

 private:
  std::mt19937_64 gen_;
};

/// Polynomial sum_k t^k C_k from a list of coefficient matrices.
inline MatrixFunction poly(const std::vector<Matrix>& c) { return MatrixFunction::polynomial(c); }

/// Exactly self-adjoint polynomial pair: E = K(t) skew, A = S(t) - E'/2.
inline std::pair<MatrixFunction, MatrixFunction> self_adjoint_poly_pair(Rng& rng, Eigen::Index n, int degree) {
  std::vector<Matrix> k, s;
  for (int d = 0; d <= degree; ++d) {
    k.push_back(rng.skew(n));
    s.push_back(rng.sym(n));
  }
  auto e = poly(k);
  return {e, poly(s) - 0.5 * structdae::differentiate(e)};
}

/// Exactly skew-adjoint polynomial pair: E = S(t) symmetric, A = K(t) - E'/2.
inline std::pair<MatrixFunction, MatrixFunction> skew_adjoint_poly_pair(Rng& rng, Eigen::Index n, int degree) {
  std::vector<Matrix> k, s;
  for (int d = 0; d <= degree; ++d) {
    k.push_back(rng.skew(n));
    s.push_back(rng.sym(n));
  }
  auto e = poly(s);
  return {e, poly(k) - 0.5 * structdae::differentiate(e)};
}

/// Random polynomial transform I + 0.3 C0 + 0.3 t C1 (+ ...), nonsingular on
/// [0, 1] for the seeds used.
inline structdae::CongruenceTransform random_poly_transform(Rng& rng, Eigen::Index n, int degree) {
  std::vector<Matrix> c{rng.near_identity(n, 0.2)};
  for (int d = 1; d <= degree; ++d) c.push_back(0.2 / d * rng.matrix(n, n));
  return structdae::CongruenceTransform::from(poly(c));
}

}  // namespace testsupport
