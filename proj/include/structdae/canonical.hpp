#pragma once

#include <optional>
#include <string>
#include <vector>

#include "structdae/matfun.hpp"
#include "structdae/structure.hpp"

namespace structdae {

/// Basis Phi (n x d) of the homogeneous solution space of E x' = A x.
struct SolutionBasis {
  MatrixFunction Phi;
  MatrixFunction Phidot;
  Eigen::Index d = 0;
};

/// Solution basis of a constant regular pair, tabulated on `grid`:
/// Phi(t) = V exp((t - t0) M_d) with V spanning the finite deflating subspace.
SolutionBasis solution_basis_constant(const MatrixPair& pair, const TimeGrid& grid);

/// Named residual record returned by all verifiers and pipelines.
struct ResidualRecord {
  struct Entry {
    std::string name;
    double value = 0.0;
    bool ok = true;
    bool defect = true;  // false for measures such as inverse condition numbers
  };
  std::vector<Entry> entries;
  double tolerance = 0.0;

  /// A defect checked against `tolerance`.
  void add_defect(std::string name, double value) {
    entries.push_back({std::move(name), value, value <= tolerance, true});
  }
  /// A measure with its own acceptance test.
  void add_measure(std::string name, double value, bool ok) {
    entries.push_back({std::move(name), value, ok, false});
  }
  bool passes() const;
  double max_defect() const;
  const Entry* find(const std::string& name) const;
};

/// (E, A) congruent to ([[0, I_p, 0], [-I_p, 0, 0], [0, 0, E33]],
///                      [[0, 0, 0], [0, A22, A23], [0, A32, A33]]).
struct SelfAdjointGlobalForm {
  Eigen::Index p = 0;
  Eigen::Index algebraic = 0;  // size of the third block
  MatrixFunction E33, A22, A23, A32, A33;
  CongruenceTransform Q;
  std::optional<MatrixPair> transformed;  // apply_congruence(pair, Q), when produced by the pipeline
  ResidualRecord stages;                  // adjointness residual after each proof step

  /// Hand-assembled form with Q = I (no transformed pair).
  static SelfAdjointGlobalForm from_blocks(Eigen::Index p, MatrixFunction e33, MatrixFunction a22, MatrixFunction a23,
                                           MatrixFunction a32, MatrixFunction a33);
  /// The canonical layout assembled from the blocks.
  MatrixPair assembled(const TimeGrid& interval) const;
};

/// (E, A) congruent to (diag(I_p, -I_q, E33), diag(0, 0, A33)).
struct SkewAdjointGlobalForm {
  Eigen::Index p = 0;
  Eigen::Index q = 0;
  Eigen::Index algebraic = 0;
  MatrixFunction E33, A33;
  CongruenceTransform Q;
  std::optional<MatrixPair> transformed;
  ResidualRecord stages;

  static SkewAdjointGlobalForm from_blocks(Eigen::Index p, Eigen::Index q, MatrixFunction e33, MatrixFunction a33);
  MatrixPair assembled(const TimeGrid& interval) const;
};

SelfAdjointGlobalForm global_canonical_self(const MatrixPair& pair, const SolutionBasis& basis, const TimeGrid& grid);
SkewAdjointGlobalForm global_canonical_skew(const MatrixPair& pair, const SolutionBasis& basis, const TimeGrid& grid);

ResidualRecord verify_self_global_form(const SelfAdjointGlobalForm& form, const TimeGrid& grid, double tol);
ResidualRecord verify_skew_global_form(const SkewAdjointGlobalForm& form, const TimeGrid& grid, double tol);

enum class LocalVariant { SelfOrthogonal, SelfRefined, SkewOrthogonal, SkewRefined };

/// Blocks of a local canonical form with a nilpotent chain of length
/// w = gamma_sizes.size(). The (2,2) part of E is Delta (J for the refined
/// self variant, S for the refined skew variant); the (2,2) part of A is
/// [[Sigma11, Sigma12], [Sigma21, Sigma22]] with Sigma11 = C (self refined) or
/// J (skew refined). A14 carries Gamma_w, ..., Gamma_1 on its block
/// anti-diagonal (identities in the refined variants); E14 vanishes on and
/// below its block anti-diagonal.
struct LocalFormBlocks {
  LocalVariant variant;
  MatrixFunction Delta;
  MatrixFunction Sigma11, Sigma12, Sigma21, Sigma22;
  MatrixFunction E14, E41, A14, A41;
  std::vector<Eigen::Index> gamma_sizes;  // sizes of Gamma_1, ..., Gamma_w
};

ResidualRecord verify_local_form(const LocalFormBlocks& blocks, const TimeGrid& grid, double tol);

/// Standard symplectic unit [[0, I_p], [-I_p, 0]].
Matrix symplectic_unit(Eigen::Index p);

}  // namespace structdae
