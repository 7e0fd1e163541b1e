#pragma once

#include <cstddef>
#include <string_view>

namespace btb::simd {

/// Data-parallel inner loops. Every variant computes each output element with
/// the same operation order as the scalar reference, so elementwise kernels
/// agree bit-for-bit across variants. Only the reductions (`sum_*`) reorder
/// additions and may differ in the last bits.
struct KernelTable {
  std::string_view name;

  /// dst[i] = sum_k w[k] * src[i + k], k ascending. `src` holds n + taps - 1 values.
  void (*fir)(const double* src, std::size_t n, const double* w, std::size_t taps, double* dst);
  /// Centered weighted sum that reproduces constant input exactly:
  /// dst[i] = total * c + sum_k w[k] * (src[i + k] - c), c = src[i + taps / 2].
  void (*fir_centered)(const double* src, std::size_t n, const double* w, std::size_t taps, double total,
                       double* dst);
  /// acc[i] += w * src[i]
  void (*accumulate_scaled)(double* acc, const double* src, double w, std::size_t n);
  /// acc[i] += w * (src[i] - center[i])
  void (*accumulate_centered)(double* acc, const double* src, const double* center, double w, std::size_t n);
  /// out[i] = a * x[i] + b * y[i]
  void (*axpby)(double a, const double* x, double b, const double* y, double* out, std::size_t n);
  /// out[i] = (a[i] - b[i])^2
  void (*sq_diff)(const double* a, const double* b, double* out, std::size_t n);
  /// out[i] = v[i] / clip(sqrt(energy_sq[i])), clip(s) = s if s >= tau else 1
  void (*rfn_normalize)(const double* v, const double* energy_sq, double tau, double* out, std::size_t n);
  /// out[i] = (normalized[i] - s_i) * v[i], s_i = 1 or sign(v[i])
  void (*rfn_response)(const double* v, const double* energy_sq, double tau, bool signed_variant,
                       double* out, std::size_t n);

  double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
  double (*sum_sq)(const double* a, std::size_t n);
  double (*sum_abs)(const double* a, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;

/// AVX2 variant, or nullptr when not compiled in or unsupported by this CPU.
const KernelTable* avx2_kernels() noexcept;

/// Table chosen at first use: AVX2 when available, unless the environment
/// variable BTB_SIMD=scalar forces the reference path.
const KernelTable& active() noexcept;

/// Overrides the active table (tests and benchmarks). Not thread-safe with
/// concurrent kernel use.
void set_active(const KernelTable& table) noexcept;

}  // namespace btb::simd
