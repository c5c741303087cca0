#pragma once

#include "structdae/matfun.hpp"

namespace structdae {

/// U^T F V = diag(Sigma, 0) with pointwise orthogonal U, V.
struct RankSplit {
  MatrixFunction U;
  MatrixFunction V;
  MatrixFunction Sigma;
  Eigen::Index r = 0;
};

/// Q^T E Q = diag(Sigma, 0) with a single pointwise orthogonal Q.
struct SymRankSplit {
  MatrixFunction Q;
  MatrixFunction Sigma;
  Eigen::Index r = 0;
};

/// W^T D W = diag(I_p, -I_q).
struct InertiaSplit {
  MatrixFunction W;
  Eigen::Index p = 0;
  Eigen::Index q = 0;
};

/// U^T B = [B1; 0] with B1 square, upper triangular, positive diagonal.
struct RowRankNormalization {
  MatrixFunction U;
  MatrixFunction B1;
};

// All four factorizations work pointwise on `grid` and align the bases of
// consecutive grid points by orthogonal Procrustes rotations within each
// invariant subspace, so the factors vary continuously. At the first point the
// bases are rotated as close as possible to the identity's columns, which
// makes already-split inputs come back with identity factors. Constant inputs
// are factored once and return constant factors; everything else comes back
// as cubic-spline sampled functions on `grid`.
//
// gap_tol <= 0 selects the default relative threshold 1e-8 * sigma_max.

RankSplit rank_split(const MatrixFunction& f, const TimeGrid& grid, double gap_tol = 0.0);
SymRankSplit sym_rank_split(const MatrixFunction& e, const TimeGrid& grid, double gap_tol = 0.0);
InertiaSplit smooth_inertia(const MatrixFunction& d, const TimeGrid& grid);
RowRankNormalization row_rank_normalize(const MatrixFunction& b, const TimeGrid& grid);

}  // namespace structdae
