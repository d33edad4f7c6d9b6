#pragma once

#include <optional>
#include <vector>

#include "sos_cones/linalg.hpp"
#include "sos_cones/polybasis.hpp"

/// Lifting operators (coefficients -> symmetric matrices) for the scalar SOS,
/// SOS-PSD and SOS-L2 cones, their adjoints, and the block-arrowhead Schur
/// machinery used by the L2 and L1 barriers.
namespace sos_cones {

/// Side dimension m -> number of lower-triangle entries m(m+1)/2.
constexpr Index sdim(Index m) { return m * (m + 1) / 2; }

/// Position of entry (i, j), i >= j, in column-major lower-triangle storage:
/// (0,0), (1,0), ..., (m-1,0), (1,1), (2,1), ...
constexpr Index tri_index(Index m, Index i, Index j) {
  return j * m - j * (j - 1) / 2 + (i - j);
}

/// Values of m polynomials at the U interpolation points, one column each.
struct PolyVec {
  MatrixXd coeffs;  // U x m

  Index U() const { return coeffs.rows(); }
  Index m() const { return coeffs.cols(); }
};

/// Symmetric polynomial matrix: lower-triangle slices, unscaled.
struct PolyMat {
  Index side = 0;
  MatrixXd coeffs;  // U x sdim(side)

  PolyMat() = default;
  PolyMat(Index m, Index num_u) : side(m), coeffs(MatrixXd::Zero(num_u, sdim(m))) {}

  Index U() const { return coeffs.rows(); }
  /// Slice (i, j) in either orientation.
  auto slice(Index i, Index j) { return coeffs.col(i >= j ? tri_index(side, i, j) : tri_index(side, j, i)); }
  auto slice(Index i, Index j) const { return coeffs.col(i >= j ? tri_index(side, i, j) : tri_index(side, j, i)); }
};

/// Trace inner product on symmetric polynomial matrices: off-diagonal
/// slices count twice.
double polymat_inner(const PolyMat& a, const PolyMat& b);

/// Dense m x m grid of equally sized square blocks.
struct BlockGrid {
  Index side = 0;
  Index block = 0;
  std::vector<MatrixXd> blocks;  // row-major over the grid

  BlockGrid(Index m, Index l) : side(m), block(l), blocks(m * m, MatrixXd::Zero(l, l)) {}
  MatrixXd& at(Index i, Index j) { return blocks[i * side + j]; }
  const MatrixXd& at(Index i, Index j) const { return blocks[i * side + j]; }
  MatrixXd assemble() const;
};

/// The (i, j) block of a dense matrix partitioned into l x l blocks.
inline auto block_of(const MatrixXd& a, Index i, Index j, Index l) {
  return a.block(i * l, j * l, l, l);
}

MatrixXd lambda_sos(const WeightRecord& w, const VectorXd& s);
VectorXd lambda_sos_adjoint(const WeightRecord& w, const MatrixXd& S);

MatrixXd lambda_psd(const WeightRecord& w, const PolyMat& S);
PolyMat lambda_psd_adjoint(const WeightRecord& w, const MatrixXd& S, Index m);

MatrixXd lambda_l2(const WeightRecord& w, const PolyVec& s);
PolyVec lambda_l2_adjoint(const WeightRecord& w, const MatrixXd& S, Index m);

/// Lambda(s_1) - sum_{i>=2} Lambda(s_i) Lambda(s_1)^{-1} Lambda(s_i), with the
/// inverse applied through the supplied factor of Lambda(s_1).
MatrixXd schur_pi(const WeightRecord& w, const PolyVec& s, const Cholesky& chol_first);

/// Factorizations behind a block-arrowhead matrix with diagonal blocks X_1,
/// first-row blocks X_i (i >= 2): chol(X_1) and chol(Pi) with
/// Pi = X_1 - sum X_i X_1^{-1} X_i.
struct ArrowFactors {
  std::vector<MatrixXd> lifted;  // X_1, ..., X_m
  Cholesky chol_first;
  MatrixXd pi;
  Cholesky chol_pi;
};

/// Returns nullopt unless both X_1 and Pi are strictly positive definite.
std::optional<ArrowFactors> factor_arrow(std::vector<MatrixXd> lifted);

/// All blocks of the inverse of the arrowhead matrix from its two L x L
/// factorizations.
BlockGrid arrow_inverse(const ArrowFactors& f);

/// Blocks of lambda_l2(s)^{-1}. Throws SingularPoint if either factorization
/// fails.
BlockGrid block_arrow_inverse_blocks(const WeightRecord& w, const PolyVec& s);

/// Coefficients of the arrow matrix [q1, q^T; q, q1 I].
PolyMat arrow_embed(const PolyVec& q);

}  // namespace sos_cones
