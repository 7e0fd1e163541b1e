#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "btb/image.hpp"

namespace btb {

/// Single-step denoiser f(x) plugged into the fixed-point iteration.
/// Implementations are immutable and deterministic; denoise preserves shape.
class DenoiserEngine {
 public:
  virtual ~DenoiserEngine() = default;
  virtual Image denoise(const Image& img) const = 0;
  virtual std::string name() const = 0;
  /// Engine spec string that parse_engine accepts, e.g. "median:r=1".
  virtual std::string describe() const = 0;
};

struct NlmParams {
  std::size_t patch_radius = 1;
  std::size_t search_radius = 5;
  double h = 10.0;
  double sigma_est = 0.0;

  void validate() const;
};

Image denoise_gaussian(const Image& img, double std_dev);
Image denoise_median(const Image& img, std::size_t radius);
/// Weights exp(-max(d2 - 2 sigma_est^2, 0) / h^2) with d2 the mean squared
/// patch difference; the center pixel takes the largest neighbor weight.
Image denoise_nlm(const Image& img, const NlmParams& p);

class GaussianEngine final : public DenoiserEngine {
 public:
  explicit GaussianEngine(double std_dev);
  Image denoise(const Image& img) const override { return denoise_gaussian(img, std_); }
  std::string name() const override { return "gaussian"; }
  std::string describe() const override;

 private:
  double std_;
};

class MedianEngine final : public DenoiserEngine {
 public:
  explicit MedianEngine(std::size_t radius);
  Image denoise(const Image& img) const override { return denoise_median(img, radius_); }
  std::string name() const override { return "median"; }
  std::string describe() const override;

 private:
  std::size_t radius_;
};

class NlmEngine final : public DenoiserEngine {
 public:
  explicit NlmEngine(NlmParams params);
  Image denoise(const Image& img) const override { return denoise_nlm(img, params_); }
  std::string name() const override { return "nlm"; }
  std::string describe() const override;
  const NlmParams& params() const noexcept { return params_; }

 private:
  NlmParams params_;
};

/// f(x) = x. Every image is a fixed point.
class IdentityEngine final : public DenoiserEngine {
 public:
  Image denoise(const Image& img) const override { return img; }
  std::string name() const override { return "identity"; }
  std::string describe() const override { return "identity"; }
};

/// f(x) = x* + q (x - x*): a strict contraction toward a known fixed point,
/// used to check convergence rates against closed forms.
class AffineEngine final : public DenoiserEngine {
 public:
  AffineEngine(Image fixed_point, double q);
  Image denoise(const Image& img) const override;
  std::string name() const override { return "affine"; }
  std::string describe() const override;
  double q() const noexcept { return q_; }
  const Image& fixed_point() const noexcept { return fixed_point_; }

 private:
  Image fixed_point_;
  double q_;
};

/// Parses "gaussian:std=1.5", "median:r=1", "nlm:patch=1,search=5,h=10[,sigma=0]", "identity".
std::unique_ptr<DenoiserEngine> parse_engine(std::string_view spec);

}  // namespace btb
