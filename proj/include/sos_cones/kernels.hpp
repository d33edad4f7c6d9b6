#pragma once

#include <cstddef>
#include <string_view>

/// Data-parallel inner loops shared by the lifting operators and the barrier
/// derivatives. Every kernel has a scalar reference implementation and, where
/// the CPU supports it, an AVX2+FMA variant selected once at startup. All
/// matrices are dense column-major with a leading dimension equal to the row
/// count (the Eigen default layout).
namespace sos_cones::kernels {

enum class Isa { kScalar, kAvx2 };

struct KernelTable {
  /// out (cols x cols, full symmetric) = P^T Diag(v) P, P is rows x cols.
  void (*weighted_gram)(const double* p, std::size_t rows, std::size_t cols,
                        const double* v, double* out);
  /// out[r] = sum_c a(r, c) * b(r, c).
  void (*rowwise_dot)(const double* a, const double* b, std::size_t rows,
                      std::size_t cols, double* out);
  /// out[k] += alpha * a[k] * b[k] for k < len.
  void (*hadamard_axpy)(double alpha, const double* a, const double* b,
                        std::size_t len, double* out);
  /// Returns sum_k a[k] * b[k].
  double (*dot)(const double* a, const double* b, std::size_t len);
};

const KernelTable& scalar_table();
const KernelTable& avx2_table();

/// True if the running CPU can execute the given variant.
bool isa_available(Isa isa);

/// The table used by the library. Chosen on first use: AVX2 when available,
/// unless SOS_CONES_SIMD=scalar is set in the environment.
const KernelTable& active();
Isa active_isa();

/// Overrides the dispatch decision (benchmarks and equivalence tests). Falls
/// back to scalar if the requested variant is not available.
void force_isa(Isa isa);

std::string_view isa_name(Isa isa);

}  // namespace sos_cones::kernels
