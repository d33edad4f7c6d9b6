#include <atomic>
#include <cstdlib>
#include <string_view>

#include "sos_cones/kernels.hpp"

namespace sos_cones::kernels {
namespace {

Isa detect() {
  const char* env = std::getenv("SOS_CONES_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar") return Isa::kScalar;
  return isa_available(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& active() {
  return current().load(std::memory_order_relaxed) == Isa::kAvx2 ? avx2_table()
                                                                 : scalar_table();
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  current().store(isa_available(isa) ? isa : Isa::kScalar,
                  std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) {
  return isa == Isa::kAvx2 ? "avx2" : "scalar";
}

}  // namespace sos_cones::kernels
