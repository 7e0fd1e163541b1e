#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "btb/errors.hpp"

namespace btb {

/// Row-major grid of real intensities. `peak` is the nominal maximum value
/// (255 for 8-bit sources, 1 for normalized tomograms) and drives PSNR and
/// 8-bit quantization.
class Image {
 public:
  Image() = default;
  Image(std::size_t height, std::size_t width, double peak = 255.0, double fill = 0.0);
  Image(std::size_t height, std::size_t width, std::vector<double> data, double peak = 255.0);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  double peak() const noexcept { return peak_; }
  void set_peak(double peak);

  double& operator()(std::size_t row, std::size_t col) noexcept { return data_[row * width_ + col]; }
  double operator()(std::size_t row, std::size_t col) const noexcept { return data_[row * width_ + col]; }

  std::span<double> pixels() noexcept { return data_; }
  std::span<const double> pixels() const noexcept { return data_; }
  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * width_, width_}; }
  std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * width_, width_}; }

  bool same_shape(const Image& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }
  bool all_finite() const noexcept;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  double peak_ = 255.0;
  std::vector<double> data_;
};

void require_same_shape(const Image& a, const Image& b, const char* what);

/// Odd-sided square kernel. When the kernel is an outer product of a 1D
/// profile with itself, `separable_factor` holds that profile and
/// convolution takes the two-pass route.
class Kernel2D {
 public:
  Kernel2D(std::size_t side, std::vector<double> weights);
  static Kernel2D identity();
  static Kernel2D outer(std::span<const double> profile);

  std::size_t side() const noexcept { return side_; }
  std::size_t radius() const noexcept { return side_ / 2; }
  double at(std::size_t row, std::size_t col) const noexcept { return weights_[row * side_ + col]; }
  std::span<const double> weights() const noexcept { return weights_; }
  const std::vector<double>& separable_factor() const noexcept { return factor_; }
  double sum() const noexcept;

 private:
  std::size_t side_;
  std::vector<double> weights_;
  std::vector<double> factor_;
};

enum class PaddingMode { Symmetric, Zero, Replicate };

/// Maps an out-of-range index into [0, n) for the given padding mode.
/// Returns -1 for Zero padding outside the image.
std::ptrdiff_t pad_index(std::ptrdiff_t i, std::ptrdiff_t n, PaddingMode mode) noexcept;

// Elementwise helpers used throughout; all dispatch to the active SIMD table.
Image axpby(double a, const Image& x, double b, const Image& y);
/// base + mu * (target - base); returns `base` unchanged, bit for bit, when target == base.
Image relax(const Image& base, double mu, const Image& target);
double l2_distance(const Image& a, const Image& b);
double l2_norm(const Image& a);
double l1_norm(const Image& a);

}  // namespace btb
