#include "sos_cones/lifting.hpp"

#include "sos_cones/errors.hpp"

namespace sos_cones {
namespace {

void check_u(const WeightRecord& w, Index num_u, const char* what) {
  if (w.values.size() != num_u) throw ShapeMismatch(std::string(what) + ": U mismatch");
}

void check_square(const MatrixXd& S, Index side, const char* what) {
  if (S.rows() != side || S.cols() != side)
    throw ShapeMismatch(std::string(what) + ": expected " + std::to_string(side) +
                        " x " + std::to_string(side) + " matrix");
}

}  // namespace

double polymat_inner(const PolyMat& a, const PolyMat& b) {
  if (a.side != b.side || a.U() != b.U()) throw ShapeMismatch("polymat_inner: shape mismatch");
  double acc = 0.0;
  for (Index j = 0; j < a.side; ++j)
    for (Index i = j; i < a.side; ++i)
      acc += (i == j ? 1.0 : 2.0) * a.slice(i, j).dot(b.slice(i, j));
  return acc;
}

MatrixXd BlockGrid::assemble() const {
  MatrixXd out(side * block, side * block);
  for (Index i = 0; i < side; ++i)
    for (Index j = 0; j < side; ++j) out.block(i * block, j * block, block, block) = at(i, j);
  return out;
}

MatrixXd lambda_sos(const WeightRecord& w, const VectorXd& s) {
  check_u(w, s.size(), "lambda_sos");
  return weighted_gram(w.p, w.values.cwiseProduct(s));
}

VectorXd lambda_sos_adjoint(const WeightRecord& w, const MatrixXd& S) {
  check_square(S, w.cols, "lambda_sos_adjoint");
  const MatrixXd ps = w.p * S;
  return w.values.cwiseProduct(rowwise_dot(ps, w.p));
}

MatrixXd lambda_psd(const WeightRecord& w, const PolyMat& S) {
  check_u(w, S.U(), "lambda_psd");
  const Index l = w.cols;
  const Index m = S.side;
  MatrixXd out(l * m, l * m);
  for (Index j = 0; j < m; ++j) {
    for (Index i = j; i < m; ++i) {
      const MatrixXd blk = lambda_sos(w, S.slice(i, j));
      out.block(i * l, j * l, l, l) = blk;
      if (i != j) out.block(j * l, i * l, l, l) = blk;
    }
  }
  return out;
}

PolyMat lambda_psd_adjoint(const WeightRecord& w, const MatrixXd& S, Index m) {
  const Index l = w.cols;
  check_square(S, l * m, "lambda_psd_adjoint");
  PolyMat out(m, w.values.size());
  for (Index j = 0; j < m; ++j)
    for (Index i = j; i < m; ++i)
      out.slice(i, j) = lambda_sos_adjoint(w, block_of(S, i, j, l));
  return out;
}

MatrixXd lambda_l2(const WeightRecord& w, const PolyVec& s) {
  check_u(w, s.U(), "lambda_l2");
  const Index l = w.cols;
  const Index m = s.m();
  MatrixXd out = MatrixXd::Zero(l * m, l * m);
  const MatrixXd first = lambda_sos(w, s.coeffs.col(0));
  for (Index i = 0; i < m; ++i) out.block(i * l, i * l, l, l) = first;
  for (Index i = 1; i < m; ++i) {
    const MatrixXd blk = lambda_sos(w, s.coeffs.col(i));
    out.block(0, i * l, l, l) = blk;
    out.block(i * l, 0, l, l) = blk;
  }
  return out;
}

PolyVec lambda_l2_adjoint(const WeightRecord& w, const MatrixXd& S, Index m) {
  const Index l = w.cols;
  check_square(S, l * m, "lambda_l2_adjoint");
  PolyVec out{MatrixXd::Zero(w.values.size(), m)};
  for (Index j = 0; j < m; ++j) out.coeffs.col(0) += lambda_sos_adjoint(w, block_of(S, j, j, l));
  for (Index i = 1; i < m; ++i)
    out.coeffs.col(i) = lambda_sos_adjoint(w, block_of(S, 0, i, l)) +
                        lambda_sos_adjoint(w, block_of(S, i, 0, l));
  return out;
}

MatrixXd schur_pi(const WeightRecord& w, const PolyVec& s, const Cholesky& chol_first) {
  check_u(w, s.U(), "schur_pi");
  MatrixXd pi = lambda_sos(w, s.coeffs.col(0));
  for (Index i = 1; i < s.m(); ++i) {
    // X_i X_1^{-1} X_i = (L^{-1} X_i)^T (L^{-1} X_i) since X_i is symmetric.
    const MatrixXd half = chol_first.matrixL().solve(lambda_sos(w, s.coeffs.col(i)));
    pi.noalias() -= half.transpose() * half;
  }
  return pi;
}

std::optional<ArrowFactors> factor_arrow(std::vector<MatrixXd> lifted) {
  if (lifted.empty()) throw ShapeMismatch("factor_arrow: no blocks");
  auto chol_first = strict_cholesky(lifted[0]);
  if (!chol_first) return std::nullopt;
  MatrixXd pi = lifted[0];
  for (std::size_t i = 1; i < lifted.size(); ++i) {
    const MatrixXd half = chol_first->matrixL().solve(lifted[i]);
    pi.noalias() -= half.transpose() * half;
  }
  pi = 0.5 * (pi + pi.transpose());
  auto chol_pi = strict_cholesky(pi);
  if (!chol_pi) return std::nullopt;
  return ArrowFactors{std::move(lifted), std::move(*chol_first), std::move(pi),
                      std::move(*chol_pi)};
}

BlockGrid arrow_inverse(const ArrowFactors& f) {
  const Index m = static_cast<Index>(f.lifted.size());
  const Index l = f.lifted[0].rows();
  BlockGrid inv(m, l);

  const MatrixXd x1_inv = inverse_from(f.chol_first);
  const MatrixXd pi_inv = inverse_from(f.chol_pi);
  // Columns of U beyond the first: X_1^{-1} X_i.
  std::vector<MatrixXd> u(m);
  for (Index i = 1; i < m; ++i) u[i] = f.chol_first.solve(f.lifted[i]);

  inv.at(0, 0) = pi_inv;
  for (Index i = 1; i < m; ++i) {
    inv.at(i, 0) = -u[i] * pi_inv;
    inv.at(0, i) = inv.at(i, 0).transpose();
  }
  for (Index i = 1; i < m; ++i) {
    const MatrixXd left = u[i] * pi_inv;
    for (Index j = i; j < m; ++j) {
      MatrixXd blk = left * u[j].transpose();
      if (i == j) {
        blk += x1_inv;
        blk = 0.5 * (blk + blk.transpose());
      }
      inv.at(i, j) = blk;
      if (i != j) inv.at(j, i) = blk.transpose();
    }
  }
  return inv;
}

BlockGrid block_arrow_inverse_blocks(const WeightRecord& w, const PolyVec& s) {
  check_u(w, s.U(), "block_arrow_inverse_blocks");
  std::vector<MatrixXd> lifted;
  lifted.reserve(static_cast<std::size_t>(s.m()));
  for (Index i = 0; i < s.m(); ++i) lifted.push_back(lambda_sos(w, s.coeffs.col(i)));
  auto factors = factor_arrow(std::move(lifted));
  if (!factors) throw SingularPoint("block_arrow_inverse_blocks: arrowhead matrix is not positive definite");
  return arrow_inverse(*factors);
}

PolyMat arrow_embed(const PolyVec& q) {
  const Index m = q.m();
  PolyMat out(m, q.U());
  for (Index i = 0; i < m; ++i) out.slice(i, i) = q.coeffs.col(0);
  for (Index i = 1; i < m; ++i) out.slice(i, 0) = q.coeffs.col(i);
  return out;
}

}  // namespace sos_cones
