#include "sos_cones/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define SOS_CONES_HAVE_AVX2_VARIANT 1
#define SOS_CONES_AVX2 __attribute__((target("avx2,fma")))
#endif

namespace sos_cones::kernels {

#ifdef SOS_CONES_HAVE_AVX2_VARIANT
namespace {

SOS_CONES_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

SOS_CONES_AVX2 double dot_avx2(const double* a, const double* b,
                               std::size_t len) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= len; k += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4),
                           _mm256_loadu_pd(b + k + 4), acc1);
  }
  for (; k + 4 <= len; k += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < len; ++k) acc += a[k] * b[k];
  return acc;
}

// Three-way dot: sum_u a[u] * b[u] * v[u].
SOS_CONES_AVX2 double dot3_avx2(const double* a, const double* b,
                                const double* v, std::size_t len) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= len; k += 8) {
    __m256d w0 = _mm256_mul_pd(_mm256_loadu_pd(b + k), _mm256_loadu_pd(v + k));
    __m256d w1 =
        _mm256_mul_pd(_mm256_loadu_pd(b + k + 4), _mm256_loadu_pd(v + k + 4));
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), w0, acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), w1, acc1);
  }
  for (; k + 4 <= len; k += 4) {
    __m256d w0 = _mm256_mul_pd(_mm256_loadu_pd(b + k), _mm256_loadu_pd(v + k));
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), w0, acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < len; ++k) acc += a[k] * b[k] * v[k];
  return acc;
}

SOS_CONES_AVX2 void weighted_gram_avx2(const double* p, std::size_t rows,
                                       std::size_t cols, const double* v,
                                       double* out) {
  for (std::size_t j = 0; j < cols; ++j) {
    const double* pj = p + j * rows;
    for (std::size_t i = 0; i <= j; ++i) {
      const double acc = dot3_avx2(p + i * rows, pj, v, rows);
      out[i + j * cols] = acc;
      out[j + i * cols] = acc;
    }
  }
}

SOS_CONES_AVX2 void rowwise_dot_avx2(const double* a, const double* b,
                                     std::size_t rows, std::size_t cols,
                                     double* out) {
  std::size_t r = 0;
  for (; r + 4 <= rows; r += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t c = 0; c < cols; ++c) {
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + c * rows + r),
                            _mm256_loadu_pd(b + c * rows + r), acc);
    }
    _mm256_storeu_pd(out + r, acc);
  }
  for (; r < rows; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += a[c * rows + r] * b[c * rows + r];
    out[r] = acc;
  }
}

SOS_CONES_AVX2 void hadamard_axpy_avx2(double alpha, const double* a,
                                       const double* b, std::size_t len,
                                       double* out) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
    _mm256_storeu_pd(out + k,
                     _mm256_fmadd_pd(va, prod, _mm256_loadu_pd(out + k)));
  }
  for (; k < len; ++k) out[k] += alpha * a[k] * b[k];
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{weighted_gram_avx2, rowwise_dot_avx2,
                                 hadamard_axpy_avx2, dot_avx2};
  return table;
}

#else

const KernelTable& avx2_table() { return scalar_table(); }

#endif

}  // namespace sos_cones::kernels
