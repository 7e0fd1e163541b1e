// Compiled with -mavx2 only; never -mfma, so that multiply-then-add rounds
// exactly like the scalar reference.
#include <immintrin.h>

#include <cmath>

#include "btb/simd.hpp"

namespace btb::simd {
namespace {

constexpr std::size_t kLanes = 4;

void fir(const double* src, std::size_t n, const double* w, std::size_t taps, double* dst) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < taps; ++k) {
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(w[k]), _mm256_loadu_pd(src + i + k)));
    }
    _mm256_storeu_pd(dst + i, acc);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < taps; ++k) acc = acc + w[k] * src[i + k];
    dst[i] = acc;
  }
}

void fir_centered(const double* src, std::size_t n, const double* w, std::size_t taps, double total, double* dst) {
  const std::size_t mid = taps / 2;
  const __m256d tv = _mm256_set1_pd(total);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d c = _mm256_loadu_pd(src + i + mid);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < taps; ++k) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(src + i + k), c);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(w[k]), d));
    }
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_mul_pd(tv, c), acc));
  }
  for (; i < n; ++i) {
    const double c = src[i + mid];
    double acc = 0.0;
    for (std::size_t k = 0; k < taps; ++k) acc = acc + w[k] * (src[i + k] - c);
    dst[i] = total * c + acc;
  }
}

void accumulate_centered(double* acc, const double* src, const double* center, double w, std::size_t n) {
  const __m256d wv = _mm256_set1_pd(w);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(src + i), _mm256_loadu_pd(center + i));
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_mul_pd(wv, d)));
  }
  for (; i < n; ++i) acc[i] = acc[i] + w * (src[i] - center[i]);
}

void accumulate_scaled(double* acc, const double* src, double w, std::size_t n) {
  const __m256d wv = _mm256_set1_pd(w);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d a = _mm256_loadu_pd(acc + i);
    _mm256_storeu_pd(acc + i, _mm256_add_pd(a, _mm256_mul_pd(wv, _mm256_loadu_pd(src + i))));
  }
  for (; i < n; ++i) acc[i] = acc[i] + w * src[i];
}

void axpby(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  const __m256d bv = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d lhs = _mm256_mul_pd(av, _mm256_loadu_pd(x + i));
    const __m256d rhs = _mm256_mul_pd(bv, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(lhs, rhs));
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void sq_diff(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(d, d));
  }
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    out[i] = d * d;
  }
}

inline __m256d clipped_energy(__m256d energy_sq, __m256d tau) {
  const __m256d s = _mm256_sqrt_pd(energy_sq);
  const __m256d keep = _mm256_cmp_pd(s, tau, _CMP_GE_OQ);
  return _mm256_blendv_pd(_mm256_set1_pd(1.0), s, keep);
}

inline double clipped_energy(double energy_sq, double tau) {
  const double s = std::sqrt(energy_sq);
  return s >= tau ? s : 1.0;
}

void rfn_normalize(const double* v, const double* energy_sq, double tau, double* out, std::size_t n) {
  const __m256d tv = _mm256_set1_pd(tau);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d div = clipped_energy(_mm256_loadu_pd(energy_sq + i), tv);
    _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_loadu_pd(v + i), div));
  }
  for (; i < n; ++i) out[i] = v[i] / clipped_energy(energy_sq[i], tau);
}

void rfn_response(const double* v, const double* energy_sq, double tau, bool signed_variant,
                  double* out, std::size_t n) {
  const __m256d tv = _mm256_set1_pd(tau);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d x = _mm256_loadu_pd(v + i);
    const __m256d normalized = _mm256_div_pd(x, clipped_energy(_mm256_loadu_pd(energy_sq + i), tv));
    __m256d s = one;
    if (signed_variant) {
      const __m256d pos = _mm256_and_pd(_mm256_cmp_pd(x, zero, _CMP_GT_OQ), one);
      const __m256d neg = _mm256_and_pd(_mm256_cmp_pd(x, zero, _CMP_LT_OQ), one);
      s = _mm256_sub_pd(pos, neg);
    }
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_sub_pd(normalized, s), x));
  }
  for (; i < n; ++i) {
    const double normalized = v[i] / clipped_energy(energy_sq[i], tau);
    double s = 1.0;
    if (signed_variant) s = v[i] > 0.0 ? 1.0 : (v[i] < 0.0 ? -1.0 : 0.0);
    out[i] = (normalized - s) * v[i];
  }
}

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double total = horizontal_sum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

double sum_sq(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d x = _mm256_loadu_pd(a + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(x, x));
  }
  double total = horizontal_sum(acc);
  for (; i < n; ++i) total += a[i] * a[i];
  return total;
}

double sum_abs(const double* a, std::size_t n) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) acc = _mm256_add_pd(acc, _mm256_and_pd(_mm256_loadu_pd(a + i), mask));
  double total = horizontal_sum(acc);
  for (; i < n; ++i) total += std::fabs(a[i]);
  return total;
}

}  // namespace

const KernelTable& avx2_kernel_table() noexcept {
  static const KernelTable table{"avx2",      fir,           fir_centered, accumulate_scaled, accumulate_centered,
                                 axpby,       sq_diff,       rfn_normalize, rfn_response,   sum_sq_diff,
                                 sum_sq,      sum_abs};
  return table;
}

}  // namespace btb::simd
