#include <cmath>

#include "btb/simd.hpp"

namespace btb::simd {
namespace {

void fir(const double* src, std::size_t n, const double* w, std::size_t taps, double* dst) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < taps; ++k) acc = acc + w[k] * src[i + k];
    dst[i] = acc;
  }
}

void fir_centered(const double* src, std::size_t n, const double* w, std::size_t taps, double total, double* dst) {
  const std::size_t mid = taps / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = src[i + mid];
    double acc = 0.0;
    for (std::size_t k = 0; k < taps; ++k) acc = acc + w[k] * (src[i + k] - c);
    dst[i] = total * c + acc;
  }
}

void accumulate_centered(double* acc, const double* src, const double* center, double w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] = acc[i] + w * (src[i] - center[i]);
}

void accumulate_scaled(double* acc, const double* src, double w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] = acc[i] + w * src[i];
}

void axpby(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void sq_diff(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    out[i] = d * d;
  }
}

inline double clipped_energy(double energy_sq, double tau) {
  const double s = std::sqrt(energy_sq);
  return s >= tau ? s : 1.0;
}

void rfn_normalize(const double* v, const double* energy_sq, double tau, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = v[i] / clipped_energy(energy_sq[i], tau);
}

void rfn_response(const double* v, const double* energy_sq, double tau, bool signed_variant,
                  double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double normalized = v[i] / clipped_energy(energy_sq[i], tau);
    double s = 1.0;
    if (signed_variant) s = v[i] > 0.0 ? 1.0 : (v[i] < 0.0 ? -1.0 : 0.0);
    out[i] = (normalized - s) * v[i];
  }
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double sum_sq(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

double sum_abs(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(a[i]);
  return acc;
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{"scalar",    fir,           fir_centered, accumulate_scaled, accumulate_centered,
                                 axpby,       sq_diff,       rfn_normalize, rfn_response,   sum_sq_diff,
                                 sum_sq,      sum_abs};
  return table;
}

}  // namespace btb::simd
