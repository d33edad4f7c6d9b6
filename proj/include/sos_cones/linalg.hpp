#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

namespace sos_cones {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

using Cholesky = Eigen::LLT<MatrixXd>;

/// Relative pivot threshold below which a Cholesky factorization is treated as
/// failed: a matrix is "strictly positive definite" iff every pivot is at
/// least kPivotTolerance times its largest diagonal entry.
inline constexpr double kPivotTolerance = 1e-12;

/// Lower Cholesky factorization that also rejects pivots that are tiny
/// relative to the largest diagonal entry. Returns nullopt on failure.
std::optional<Cholesky> strict_cholesky(const MatrixXd& a);

/// log det A from a successful factorization A = L L^T.
double logdet(const Cholesky& chol);

/// Explicit inverse from a factorization (small dense blocks only).
MatrixXd inverse_from(const Cholesky& chol);

/// P^T Diag(v) P through the dispatched kernel.
MatrixXd weighted_gram(const MatrixXd& p, const VectorXd& v);

/// out_r = sum_c a(r, c) b(r, c), i.e. diag(A B^T), through the dispatched kernel.
VectorXd rowwise_dot(const MatrixXd& a, const MatrixXd& b);

/// out += alpha * (a o b), elementwise, through the dispatched kernel.
void hadamard_axpy(MatrixXd& out, double alpha, const MatrixXd& a,
                   const MatrixXd& b);

/// Frobenius inner product sum_ij a_ij b_ij.
double frobenius_dot(const MatrixXd& a, const MatrixXd& b);

/// Binomial coefficient C(n, k) for the small arguments used by the bases.
std::int64_t binomial(int n, int k);

}  // namespace sos_cones
