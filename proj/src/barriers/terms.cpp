#include "terms.hpp"

#include "sos_cones/errors.hpp"

namespace sos_cones::detail {

BlockGrid sandwich_grid(const MatrixXd& p, const BlockGrid& inverse_blocks) {
  const Index side = inverse_blocks.side;
  BlockGrid out(side, p.rows());
  for (Index i = 0; i < side; ++i) {
    for (Index j = i; j < side; ++j) {
      const MatrixXd half = p * inverse_blocks.at(i, j);
      out.at(i, j).noalias() = half * p.transpose();
      if (i != j) out.at(j, i) = out.at(i, j).transpose();
    }
  }
  return out;
}

BlockGrid grid_from_cholesky(const MatrixXd& p, const Cholesky& chol, Index side) {
  const Index l = p.cols();
  const Index num_u = p.rows();
  MatrixXd v = MatrixXd::Zero(l * side, num_u * side);
  for (Index i = 0; i < side; ++i) v.block(i * l, i * num_u, l, num_u) = p.transpose();
  chol.matrixL().solveInPlace(v);
  MatrixXd full(num_u * side, num_u * side);
  full.noalias() = v.transpose() * v;
  BlockGrid out(side, num_u);
  for (Index i = 0; i < side; ++i)
    for (Index j = 0; j < side; ++j) out.at(i, j) = block_of(full, i, j, num_u);
  return out;
}

MatrixXd r_matrix(const MatrixXd& p, const Cholesky& chol) {
  const MatrixXd v = chol.matrixL().solve(p.transpose());
  return v.transpose() * v;
}

void add_gradient(const Term& term, Index num_u, VectorXd& grad) {
  for (const RepSet& rep : term.reps) {
    VectorXd acc = VectorXd::Zero(num_u);
    for (const auto& [i, j] : rep.pairs) acc += term.t.at(j, i).diagonal();
    grad.segment(rep.component * num_u, num_u) -= term.factor * term.g.cwiseProduct(acc);
  }
}

void add_hessian(const Term& term, Index num_u, MatrixXd& hess) {
  MatrixXd acc(num_u, num_u);
  for (std::size_t a = 0; a < term.reps.size(); ++a) {
    for (std::size_t b = a; b < term.reps.size(); ++b) {
      const RepSet& ra = term.reps[a];
      const RepSet& rb = term.reps[b];
      acc.setZero();
      for (const auto& [p, q] : ra.pairs)
        for (const auto& [pp, qq] : rb.pairs)
          hadamard_axpy(acc, 1.0, term.t.at(q, pp), term.t.at(p, qq));
      acc = term.g.asDiagonal() * acc * term.g.asDiagonal();
      acc *= term.factor;
      hess.block(ra.component * num_u, rb.component * num_u, num_u, num_u) += acc;
      if (ra.component != rb.component)
        hess.block(rb.component * num_u, ra.component * num_u, num_u, num_u) += acc.transpose();
    }
  }
}

TermPoint::TermPoint(double value, Index dim, Index num_u, std::vector<Term> terms,
                     bool arrowhead)
    : value_(value), dim_(dim), num_u_(num_u), terms_(std::move(terms)), arrowhead_(arrowhead) {
  gradient_ = VectorXd::Zero(dim_);
  for (const Term& term : terms_) add_gradient(term, num_u_, gradient_);
}

MatrixXd TermPoint::compute_hessian() const {
  MatrixXd hess = MatrixXd::Zero(dim_, dim_);
  for (const Term& term : terms_) add_hessian(term, num_u_, hess);
  return hess;
}

MatrixXd TermPoint::hessian_inverse_apply(const MatrixXd& rhs) const {
  if (!arrowhead_) return BarrierPoint::hessian_inverse_apply(rhs);
  if (rhs.rows() != dim_) throw ShapeMismatch("hessian_inverse_apply: rhs has wrong length");
  return arrowhead_solve(hessian(), num_u_, rhs);
}

MatrixXd arrowhead_solve(const MatrixXd& hess, Index num_u, const MatrixXd& rhs) {
  const Index m = hess.rows() / num_u;
  const auto singular = [] {
    return NumericallySingularHessian("block-arrowhead Hessian is not positive definite");
  };
  // Eliminate the tail blocks: S = H11 - sum H1i Hii^{-1} Hi1.
  MatrixXd schur = hess.topLeftCorner(num_u, num_u);
  MatrixXd reduced = rhs.topRows(num_u);
  std::vector<Cholesky> tail(static_cast<std::size_t>(m));
  for (Index i = 1; i < m; ++i) {
    Cholesky& c = tail[static_cast<std::size_t>(i)];
    c.compute(block_of(hess, i, i, num_u));
    if (c.info() != Eigen::Success) throw singular();
    const MatrixXd h1i = block_of(hess, 0, i, num_u);
    schur.noalias() -= h1i * c.solve(h1i.transpose());
    reduced.noalias() -= h1i * c.solve(rhs.middleRows(i * num_u, num_u));
  }
  Cholesky cs(0.5 * (schur + schur.transpose()));
  if (cs.info() != Eigen::Success) throw singular();
  MatrixXd out(rhs.rows(), rhs.cols());
  out.topRows(num_u) = cs.solve(reduced);
  for (Index i = 1; i < m; ++i) {
    const MatrixXd r = rhs.middleRows(i * num_u, num_u) -
                       block_of(hess, i, 0, num_u) * out.topRows(num_u);
    out.middleRows(i * num_u, num_u) = tail[static_cast<std::size_t>(i)].solve(r);
  }
  if (!out.allFinite()) throw singular();
  return out;
}

}  // namespace sos_cones::detail
