#include "sos_cones/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "sos_cones/errors.hpp"
#include "sos_cones/kernels.hpp"

namespace sos_cones {

std::optional<Cholesky> strict_cholesky(const MatrixXd& a) {
  if (a.rows() != a.cols()) throw ShapeMismatch("cholesky: matrix is not square");
  if (a.rows() == 0) return Cholesky(a);
  if (!a.allFinite()) return std::nullopt;
  const double max_diag = a.diagonal().maxCoeff();
  if (!(max_diag > 0.0)) return std::nullopt;
  Cholesky chol(a);
  if (chol.info() != Eigen::Success) return std::nullopt;
  const auto diag = chol.matrixLLT().diagonal();
  const double floor = kPivotTolerance * max_diag;
  for (Index i = 0; i < diag.size(); ++i) {
    const double pivot = diag[i] * diag[i];
    if (!(pivot >= floor) || !std::isfinite(pivot)) return std::nullopt;
  }
  return chol;
}

double logdet(const Cholesky& chol) {
  return 2.0 * chol.matrixLLT().diagonal().array().log().sum();
}

MatrixXd inverse_from(const Cholesky& chol) {
  const Index n = chol.rows();
  return chol.solve(MatrixXd::Identity(n, n));
}

MatrixXd weighted_gram(const MatrixXd& p, const VectorXd& v) {
  if (v.size() != p.rows()) throw ShapeMismatch("weighted_gram: size mismatch");
  MatrixXd out(p.cols(), p.cols());
  kernels::active().weighted_gram(p.data(), static_cast<std::size_t>(p.rows()),
                                  static_cast<std::size_t>(p.cols()), v.data(),
                                  out.data());
  return out;
}

VectorXd rowwise_dot(const MatrixXd& a, const MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeMismatch("rowwise_dot: size mismatch");
  VectorXd out(a.rows());
  kernels::active().rowwise_dot(a.data(), b.data(),
                                static_cast<std::size_t>(a.rows()),
                                static_cast<std::size_t>(a.cols()), out.data());
  return out;
}

void hadamard_axpy(MatrixXd& out, double alpha, const MatrixXd& a,
                   const MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || out.rows() != a.rows() ||
      out.cols() != a.cols())
    throw ShapeMismatch("hadamard_axpy: size mismatch");
  kernels::active().hadamard_axpy(alpha, a.data(), b.data(),
                                  static_cast<std::size_t>(a.size()), out.data());
}

double frobenius_dot(const MatrixXd& a, const MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeMismatch("frobenius_dot: size mismatch");
  return kernels::active().dot(a.data(), b.data(),
                               static_cast<std::size_t>(a.size()));
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t result = 1;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

}  // namespace sos_cones
