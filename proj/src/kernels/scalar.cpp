#include "sos_cones/kernels.hpp"

namespace sos_cones::kernels {
namespace {

void weighted_gram_scalar(const double* p, std::size_t rows, std::size_t cols,
                          const double* v, double* out) {
  for (std::size_t j = 0; j < cols; ++j) {
    const double* pj = p + j * rows;
    for (std::size_t i = 0; i <= j; ++i) {
      const double* pi = p + i * rows;
      double acc = 0.0;
      for (std::size_t u = 0; u < rows; ++u) acc += pi[u] * pj[u] * v[u];
      out[i + j * cols] = acc;
      out[j + i * cols] = acc;
    }
  }
}

void rowwise_dot_scalar(const double* a, const double* b, std::size_t rows,
                        std::size_t cols, double* out) {
  for (std::size_t r = 0; r < rows; ++r) out[r] = 0.0;
  for (std::size_t c = 0; c < cols; ++c) {
    const double* ac = a + c * rows;
    const double* bc = b + c * rows;
    for (std::size_t r = 0; r < rows; ++r) out[r] += ac[r] * bc[r];
  }
}

void hadamard_axpy_scalar(double alpha, const double* a, const double* b,
                          std::size_t len, double* out) {
  for (std::size_t k = 0; k < len; ++k) out[k] += alpha * a[k] * b[k];
}

double dot_scalar(const double* a, const double* b, std::size_t len) {
  double acc = 0.0;
  for (std::size_t k = 0; k < len; ++k) acc += a[k] * b[k];
  return acc;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{weighted_gram_scalar, rowwise_dot_scalar,
                                 hadamard_axpy_scalar, dot_scalar};
  return table;
}

}  // namespace sos_cones::kernels
