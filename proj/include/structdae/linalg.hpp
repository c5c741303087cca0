#pragma once

#include "structdae/matfun.hpp"

/// Small dense helpers shared by the factorization and reduction modules.
namespace structdae::linalg {

inline Matrix sym_part(const Matrix& m) { return 0.5 * (m + m.transpose()); }
inline Matrix skew_part(const Matrix& m) { return 0.5 * (m - m.transpose()); }

/// Orthogonal factor of the polar decomposition of a square matrix.
Matrix polar_factor(const Matrix& x);

/// Rotates the orthonormal columns of `z` (within their span) to be as close
/// as possible to `target` in the Frobenius norm.
Matrix procrustes_align(const Matrix& z, const Matrix& target);

/// Flips column signs so that the entry of largest magnitude is positive.
void sign_normalize(Matrix& z);

/// Orthonormal basis of the orthogonal complement of span(z).
Matrix orthonormal_complement(const Matrix& z);

/// Sine of the largest principal angle between the spans of two orthonormal
/// bases of equal size.
double subspace_distance(const Matrix& z1, const Matrix& z2);

struct SymEig {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns
};
SymEig sym_eig(const Matrix& s);

/// Symmetric positive definite square root and its inverse.
Matrix spd_sqrt(const Matrix& s);
Matrix spd_inv_sqrt(const Matrix& s);

/// Solves R X + X R = C for X, with R symmetric positive definite. This is
/// the derivative of the square root R = S^{1/2} when C = dS/dt.
Matrix sqrt_derivative(const Matrix& r, const Matrix& c);

/// Ratio of smallest to largest singular value (0 for an all-zero matrix).
double inverse_condition(const Matrix& m);

/// Dense solve of A X = B; throws Singular mentioning `what` if A is
/// numerically singular.
Matrix solve(const Matrix& a, const Matrix& b, const std::string& what, double rcond_min = 1e-14);
Matrix inverse(const Matrix& a, const std::string& what, double rcond_min = 1e-14);

/// Matrix exponential.
Matrix expm(const Matrix& m);

}  // namespace structdae::linalg
