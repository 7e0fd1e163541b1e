#include "btb/convolve.hpp"

#include <algorithm>
#include <vector>

#include "btb/simd.hpp"

namespace btb {
namespace {

std::vector<double> reversed(std::span<const double> w) { return {w.rbegin(), w.rend()}; }

void require_odd(std::size_t n) {
  if (n == 0 || n % 2 == 0) throw ConfigError("convolution profile length must be odd and positive");
}

// Copies row `r` of `img` into `dst` with `radius` padded samples on each side.
void fill_padded_row(const Image& img, std::size_t r, std::size_t radius, PaddingMode pad, std::vector<double>& dst) {
  const auto w = static_cast<std::ptrdiff_t>(img.width());
  const auto rad = static_cast<std::ptrdiff_t>(radius);
  dst.resize(img.width() + 2 * radius);
  const auto src = img.row(r);
  std::copy(src.begin(), src.end(), dst.begin() + rad);
  for (std::ptrdiff_t i = 0; i < rad; ++i) {
    const std::ptrdiff_t left = pad_index(i - rad, w, pad);
    const std::ptrdiff_t right = pad_index(w + i, w, pad);
    dst[static_cast<std::size_t>(i)] = left < 0 ? 0.0 : src[static_cast<std::size_t>(left)];
    dst[static_cast<std::size_t>(w + rad + i)] = right < 0 ? 0.0 : src[static_cast<std::size_t>(right)];
  }
}

}  // namespace

Image convolve_rows(const Image& img, std::span<const double> profile, PaddingMode pad) {
  require_odd(profile.size());
  const auto& kt = simd::active();
  const std::vector<double> taps = reversed(profile);
  const std::size_t radius = profile.size() / 2;
  Image out(img.height(), img.width(), img.peak());
  std::vector<double> padded;
  for (std::size_t r = 0; r < img.height(); ++r) {
    fill_padded_row(img, r, radius, pad, padded);
    kt.fir(padded.data(), img.width(), taps.data(), taps.size(), out.row(r).data());
  }
  return out;
}

Image convolve_cols(const Image& img, std::span<const double> profile, PaddingMode pad) {
  require_odd(profile.size());
  const auto& kt = simd::active();
  const std::vector<double> taps = reversed(profile);
  const auto radius = static_cast<std::ptrdiff_t>(profile.size() / 2);
  const auto h = static_cast<std::ptrdiff_t>(img.height());
  Image out(img.height(), img.width(), img.peak());
  for (std::ptrdiff_t r = 0; r < h; ++r) {
    double* acc = out.row(static_cast<std::size_t>(r)).data();
    for (std::size_t k = 0; k < taps.size(); ++k) {
      const std::ptrdiff_t src = pad_index(r - radius + static_cast<std::ptrdiff_t>(k), h, pad);
      // zero padding
      if (src < 0) continue;
      kt.accumulate_scaled(acc, img.row(static_cast<std::size_t>(src)).data(), taps[k], img.width());
    }
  }
  return out;
}

Image convolve2d(const Image& img, const Kernel2D& k, PaddingMode pad) {
  if (!k.separable_factor().empty()) {
    return convolve_cols(convolve_rows(img, k.separable_factor(), pad), k.separable_factor(), pad);
  }
  const auto& kt = simd::active();
  const std::size_t side = k.side();
  const std::size_t radius = k.radius();
  const auto h = static_cast<std::ptrdiff_t>(img.height());

  std::vector<std::vector<double>> padded_rows(img.height());
  for (std::size_t r = 0; r < img.height(); ++r) fill_padded_row(img, r, radius, pad, padded_rows[r]);

  Image out(img.height(), img.width(), img.peak());
  for (std::ptrdiff_t r = 0; r < h; ++r) {
    double* acc = out.row(static_cast<std::size_t>(r)).data();
    for (std::size_t i = 0; i < side; ++i) {
      const std::ptrdiff_t src =
          pad_index(r - static_cast<std::ptrdiff_t>(radius) + static_cast<std::ptrdiff_t>(i), h, pad);
      if (src < 0) continue;
      const double* row = padded_rows[static_cast<std::size_t>(src)].data();
      for (std::size_t j = 0; j < side; ++j) {
        kt.accumulate_scaled(acc, row + j, k.at(side - 1 - i, side - 1 - j), img.width());
      }
    }
  }
  return out;
}

Image centered_convolve_rows(const Image& img, std::span<const double> profile, double total, PaddingMode pad) {
  require_odd(profile.size());
  const auto& kt = simd::active();
  const std::vector<double> taps = reversed(profile);
  const std::size_t radius = profile.size() / 2;
  Image out(img.height(), img.width(), img.peak());
  std::vector<double> padded;
  for (std::size_t r = 0; r < img.height(); ++r) {
    fill_padded_row(img, r, radius, pad, padded);
    kt.fir_centered(padded.data(), img.width(), taps.data(), taps.size(), total, out.row(r).data());
  }
  return out;
}

Image centered_convolve_cols(const Image& img, std::span<const double> profile, double total, PaddingMode pad) {
  require_odd(profile.size());
  const auto& kt = simd::active();
  const std::vector<double> taps = reversed(profile);
  const auto radius = static_cast<std::ptrdiff_t>(profile.size() / 2);
  const auto h = static_cast<std::ptrdiff_t>(img.height());
  const std::vector<double> zeros(pad == PaddingMode::Zero ? img.width() : 0, 0.0);
  Image out(img.height(), img.width(), img.peak());
  std::vector<double> acc(img.width());
  for (std::ptrdiff_t r = 0; r < h; ++r) {
    const double* center = img.row(static_cast<std::size_t>(r)).data();
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t k = 0; k < taps.size(); ++k) {
      const std::ptrdiff_t src = pad_index(r - radius + static_cast<std::ptrdiff_t>(k), h, pad);
      const double* row = src < 0 ? zeros.data() : img.row(static_cast<std::size_t>(src)).data();
      kt.accumulate_centered(acc.data(), row, center, taps[k], img.width());
    }
    kt.axpby(total, center, 1.0, acc.data(), out.row(static_cast<std::size_t>(r)).data(), img.width());
  }
  return out;
}

Image centered_convolve2d(const Image& img, const Kernel2D& k, double total, PaddingMode pad) {
  const auto& kt = simd::active();
  const std::size_t side = k.side();
  const std::size_t radius = k.radius();
  const auto h = static_cast<std::ptrdiff_t>(img.height());
  const std::size_t w = img.width();

  std::vector<std::vector<double>> padded_rows(img.height());
  for (std::size_t r = 0; r < img.height(); ++r) fill_padded_row(img, r, radius, pad, padded_rows[r]);
  const std::vector<double> zeros(w + 2 * radius, 0.0);

  Image out(img.height(), w, img.peak());
  std::vector<double> acc(w);
  for (std::ptrdiff_t r = 0; r < h; ++r) {
    const double* center = img.row(static_cast<std::size_t>(r)).data();
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t i = 0; i < side; ++i) {
      const std::ptrdiff_t src =
          pad_index(r - static_cast<std::ptrdiff_t>(radius) + static_cast<std::ptrdiff_t>(i), h, pad);
      const double* row = src < 0 ? zeros.data() : padded_rows[static_cast<std::size_t>(src)].data();
      for (std::size_t j = 0; j < side; ++j) {
        kt.accumulate_centered(acc.data(), row + j, center, k.at(side - 1 - i, side - 1 - j), w);
      }
    }
    kt.axpby(total, center, 1.0, acc.data(), out.row(static_cast<std::size_t>(r)).data(), w);
  }
  return out;
}

}  // namespace btb
