#pragma once

#include <cstdint>
#include <vector>

#include "btb/denoiser.hpp"
#include "btb/image.hpp"
#include "btb/iteration.hpp"

namespace btb {

/// 10 log10(peak^2 / MSE) with the reference image's peak; +inf for
/// identical images. With `quantize_8bit`, both images are first clamped and
/// rounded to 256 levels of [0, peak].
double psnr(const Image& a, const Image& b, bool quantize_8bit = false);

struct SsimParams {
  std::size_t window = 11;
  double window_sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 0.0;  // 0 means the reference image's peak

  void validate() const;
};

/// Mean SSIM over window positions fully inside the image. Images smaller
/// than the window use the largest odd window that fits.
double ssim(const Image& a, const Image& b, const SsimParams& p = {});

struct ContractionReport {
  std::vector<double> noise_norms;  // ||x_t - x*||
  std::vector<double> ratios;       // ||w_{t+1}|| / ||w_t|| while ||w_t|| > 0
  double max_q = 0.0;
  bool monotone = false;            // every ratio < 1
};

ContractionReport contraction_report(const IterationTrace& trace, const Image& x_star);

/// Empirical contraction of an engine on AWGN: mean over seeds of
/// ||f(x + w) - x|| divided by the mean of ||w||.
double measure_noise_contraction(const DenoiserEngine& engine, const Image& clean, double sigma,
                                 std::uint64_t first_seed, std::size_t seeds);

/// Anisotropic total variation: sum of absolute horizontal and vertical differences.
double total_variation(const Image& img);

/// Clamp to [0, peak] and round to 256 levels, as an 8-bit export would.
Image quantize_8bit(const Image& img);

}  // namespace btb
