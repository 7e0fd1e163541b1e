#include <atomic>
#include <cstdlib>
#include <string_view>

#include "btb/simd.hpp"

namespace btb::simd {

#if defined(BTB_HAVE_AVX2)
const KernelTable& avx2_kernel_table() noexcept;
#endif

const KernelTable* avx2_kernels() noexcept {
#if defined(BTB_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable* select_default() noexcept {
  if (const char* env = std::getenv("BTB_SIMD"); env != nullptr && std::string_view(env) == "scalar") {
    return &scalar_kernels();
  }
  if (const KernelTable* t = avx2_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& slot() noexcept {
  static std::atomic<const KernelTable*> current{select_default()};
  return current;
}

}  // namespace

const KernelTable& active() noexcept { return *slot().load(std::memory_order_acquire); }

void set_active(const KernelTable& table) noexcept { slot().store(&table, std::memory_order_release); }

}  // namespace btb::simd
