#pragma once

#include <span>

#include "btb/image.hpp"

namespace btb {

/// 2D convolution (kernel flipped), output has the input's shape. Kernels
/// carrying a separable factor take the row/column route.
Image convolve2d(const Image& img, const Kernel2D& k, PaddingMode pad = PaddingMode::Symmetric);

/// 1D convolution along each row with an odd-length profile.
Image convolve_rows(const Image& img, std::span<const double> profile, PaddingMode pad = PaddingMode::Symmetric);

/// 1D convolution along each column with an odd-length profile.
Image convolve_cols(const Image& img, std::span<const double> profile, PaddingMode pad = PaddingMode::Symmetric);

/// Variants of the above evaluated around each output's own sample:
///   out = total * c + sum_k w_k (v_k - c).
/// Mathematically equal to the plain convolution when `total` is the weight
/// sum; constant input maps to exactly total * c.
Image centered_convolve_rows(const Image& img, std::span<const double> profile, double total,
                             PaddingMode pad = PaddingMode::Symmetric);
Image centered_convolve_cols(const Image& img, std::span<const double> profile, double total,
                             PaddingMode pad = PaddingMode::Symmetric);
Image centered_convolve2d(const Image& img, const Kernel2D& k, double total, PaddingMode pad = PaddingMode::Symmetric);

}  // namespace btb
