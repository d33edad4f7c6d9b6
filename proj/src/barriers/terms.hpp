#pragma once

// Shared machinery for barriers of the form
//   F(s) = sum_t factor_t * (-logdet X_t(s)),
// where each X_t is a block matrix whose blocks are linear in the components
// of s through one weighted lifting operator. Each term is described by the
// grid T_{ij} = P (X_t^{-1})_{ij} P^T together with "representation sets":
// for component a, the block positions (i, j) at which Lambda(s_a) appears.

#include <memory>
#include <utility>
#include <vector>

#include "sos_cones/barriers.hpp"

namespace sos_cones::detail {

struct RepSet {
  Index component = 0;
  std::vector<std::pair<Index, Index>> pairs;
};

struct Term {
  BlockGrid t;  // U x U blocks
  VectorXd g;   // weight values at the points
  std::vector<RepSet> reps;
  double factor = 1.0;
};

/// P B_{ij} P^T for every block of an inverse grid.
BlockGrid sandwich_grid(const MatrixXd& p, const BlockGrid& inverse_blocks);

/// T grid from a Cholesky factor of the full lifted matrix via
/// V = L^{-1} (I_k (x) P^T), T = V^T V.
BlockGrid grid_from_cholesky(const MatrixXd& p, const Cholesky& chol, Index side);

/// P X^{-1} P^T through the factor of X.
MatrixXd r_matrix(const MatrixXd& p, const Cholesky& chol);

void add_gradient(const Term& term, Index num_u, VectorXd& grad);
void add_hessian(const Term& term, Index num_u, MatrixXd& hess);

/// Barrier point assembled from precomputed value, gradient and terms.
/// With `arrowhead` set the Hessian has zero (i, i') blocks for distinct
/// i, i' >= 2 and is inverted by block elimination.
class TermPoint final : public BarrierPoint {
 public:
  TermPoint(double value, Index dim, Index num_u, std::vector<Term> terms, bool arrowhead);

  double value() const override { return value_; }
  VectorXd gradient() const override { return gradient_; }
  MatrixXd hessian_inverse_apply(const MatrixXd& rhs) const override;

 protected:
  MatrixXd compute_hessian() const override;

 private:
  double value_;
  Index dim_;
  Index num_u_;
  std::vector<Term> terms_;
  bool arrowhead_;
  VectorXd gradient_;
};

/// Solves H x = rhs for a Hessian with block-arrowhead component structure.
MatrixXd arrowhead_solve(const MatrixXd& hess, Index num_u, const MatrixXd& rhs);

}  // namespace sos_cones::detail
