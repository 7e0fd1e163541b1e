#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "btb/image.hpp"

namespace btb {

enum class NoiseKind { Awgn, Poisson, Speckle };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::Awgn;
  double sigma = 0.0;  // AWGN only
  std::uint64_t seed = 0;
};

/// Parses "awgn:25", "poisson" or "speckle".
NoiseSpec parse_noise_spec(std::string_view text, std::uint64_t seed);

/// img + N(0, sigma^2) per pixel, no clipping.
Image add_awgn(const Image& img, double sigma, std::uint64_t seed);

/// Each pixel replaced by a Poisson draw with the pixel value as mean.
Image add_poisson(const Image& img, std::uint64_t seed);

/// Each pixel replaced by a fully developed speckle intensity with the pixel value as mean.
Image add_speckle(const Image& img, std::uint64_t seed);

Image apply_noise(const Image& img, const NoiseSpec& spec);

/// i.i.d. exponential intensities of mean `mean_x`, drawn as |a + ib|^2 with
/// a, b ~ N(0, mean_x / 2).
std::vector<double> sample_speckle_intensity(double mean_x, std::size_t n, std::uint64_t seed);

}  // namespace btb
