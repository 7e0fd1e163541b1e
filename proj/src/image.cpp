#include "btb/image.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "btb/simd.hpp"

namespace btb {

Image::Image(std::size_t height, std::size_t width, double peak, double fill)
    : height_(height), width_(width), peak_(peak), data_(height * width, fill) {
  if (height == 0 || width == 0) throw ShapeError("image dimensions must be positive");
  set_peak(peak);
}

Image::Image(std::size_t height, std::size_t width, std::vector<double> data, double peak)
    : height_(height), width_(width), peak_(peak), data_(std::move(data)) {
  if (height == 0 || width == 0) throw ShapeError("image dimensions must be positive");
  if (data_.size() != height * width) {
    throw ShapeError("image data length " + std::to_string(data_.size()) + " does not match " +
                     std::to_string(height) + "x" + std::to_string(width));
  }
  set_peak(peak);
}

void Image::set_peak(double peak) {
  if (!(peak > 0.0) || !std::isfinite(peak)) throw DomainError("image peak must be positive and finite");
  peak_ = peak;
}

bool Image::all_finite() const noexcept {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(what) + ": shape mismatch " + std::to_string(a.height()) + "x" +
                     std::to_string(a.width()) + " vs " + std::to_string(b.height()) + "x" +
                     std::to_string(b.width()));
  }
}

Kernel2D::Kernel2D(std::size_t side, std::vector<double> weights) : side_(side), weights_(std::move(weights)) {
  if (side == 0 || side % 2 == 0) throw ConfigError("kernel side must be odd and positive");
  if (weights_.size() != side * side) throw ConfigError("kernel weight count does not match side*side");
}

Kernel2D Kernel2D::identity() {
  Kernel2D k(1, {1.0});
  k.factor_ = {1.0};
  return k;
}

Kernel2D Kernel2D::outer(std::span<const double> profile) {
  const std::size_t side = profile.size();
  std::vector<double> w(side * side);
  for (std::size_t i = 0; i < side; ++i) {
    for (std::size_t j = 0; j < side; ++j) w[i * side + j] = profile[i] * profile[j];
  }
  Kernel2D k(side, std::move(w));
  k.factor_.assign(profile.begin(), profile.end());
  return k;
}

double Kernel2D::sum() const noexcept { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

std::ptrdiff_t pad_index(std::ptrdiff_t i, std::ptrdiff_t n, PaddingMode mode) noexcept {
  if (i >= 0 && i < n) return i;
  switch (mode) {
    case PaddingMode::Zero:
      return -1;
    case PaddingMode::Replicate:
      return i < 0 ? 0 : n - 1;
    case PaddingMode::Symmetric: {
      // Half-sample mirror (edge sample repeated), periodic with period 2n.
      const std::ptrdiff_t period = 2 * n;
      std::ptrdiff_t m = i % period;
      if (m < 0) m += period;
      return m < n ? m : period - 1 - m;
    }
  }
  return -1;
}

Image axpby(double a, const Image& x, double b, const Image& y) {
  require_same_shape(x, y, "axpby");
  Image out(x.height(), x.width(), x.peak());
  simd::active().axpby(a, x.pixels().data(), b, y.pixels().data(), out.pixels().data(), x.size());
  return out;
}

Image relax(const Image& base, double mu, const Image& target) {
  require_same_shape(base, target, "relax");
  Image diff(base.height(), base.width(), base.peak());
  const auto& kt = simd::active();
  kt.axpby(1.0, target.pixels().data(), -1.0, base.pixels().data(), diff.pixels().data(), base.size());
  kt.axpby(1.0, base.pixels().data(), mu, diff.pixels().data(), diff.pixels().data(), base.size());
  return diff;
}

double l2_distance(const Image& a, const Image& b) {
  require_same_shape(a, b, "l2_distance");
  return std::sqrt(simd::active().sum_sq_diff(a.pixels().data(), b.pixels().data(), a.size()));
}

double l2_norm(const Image& a) { return std::sqrt(simd::active().sum_sq(a.pixels().data(), a.size())); }

double l1_norm(const Image& a) { return simd::active().sum_abs(a.pixels().data(), a.size()); }

}  // namespace btb
