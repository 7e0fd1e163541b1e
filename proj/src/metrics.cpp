#include "btb/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "btb/noise.hpp"
#include "btb/simd.hpp"

namespace btb {
namespace {

// Weighted sums over fully-inside windows: output is (h - side + 1) x (w - side + 1).
std::vector<double> valid_filter(const Image& img, const std::vector<double>& profile) {
  const auto& kt = simd::active();
  const std::size_t side = profile.size();
  const std::size_t oh = img.height() - side + 1;
  const std::size_t ow = img.width() - side + 1;
  std::vector<double> rows(img.height() * ow);
  for (std::size_t r = 0; r < img.height(); ++r) {
    kt.fir(img.row(r).data(), ow, profile.data(), side, rows.data() + r * ow);
  }
  std::vector<double> out(oh * ow, 0.0);
  for (std::size_t r = 0; r < oh; ++r) {
    for (std::size_t k = 0; k < side; ++k) {
      kt.accumulate_scaled(out.data() + r * ow, rows.data() + (r + k) * ow, profile[k], ow);
    }
  }
  return out;
}

Image elementwise_product(const Image& a, const Image& b) {
  Image out(a.height(), a.width(), a.peak());
  for (std::size_t i = 0; i < a.size(); ++i) out.pixels()[i] = a.pixels()[i] * b.pixels()[i];
  return out;
}

}  // namespace

Image quantize_8bit(const Image& img) {
  Image out = img;
  const double peak = img.peak();
  for (double& v : out.pixels()) {
    const double level = std::round(std::clamp(v, 0.0, peak) / peak * 255.0);
    v = level * peak / 255.0;
  }
  return out;
}

double psnr(const Image& a, const Image& b, bool quantize) {
  require_same_shape(a, b, "psnr");
  if (std::fabs(a.peak() - b.peak()) > 1e-12 * a.peak()) throw DomainError("psnr: images have different peaks");
  double sse = 0.0;
  if (quantize) {
    const Image qa = quantize_8bit(a);
    const Image qb = quantize_8bit(b);
    sse = simd::active().sum_sq_diff(qa.pixels().data(), qb.pixels().data(), a.size());
  } else {
    sse = simd::active().sum_sq_diff(a.pixels().data(), b.pixels().data(), a.size());
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(a.size());
  return 10.0 * std::log10(a.peak() * a.peak() / mse);
}

void SsimParams::validate() const {
  if (window == 0 || window % 2 == 0) throw ConfigError("SSIM window must be odd");
  if (!(window_sigma > 0.0)) throw ConfigError("SSIM window sigma must be positive");
  if (!(k1 > 0.0) || !(k2 > 0.0)) throw ConfigError("SSIM constants must be positive");
  if (!(dynamic_range >= 0.0)) throw ConfigError("SSIM dynamic range must be nonnegative");
}

double ssim(const Image& a, const Image& b, const SsimParams& p) {
  p.validate();
  require_same_shape(a, b, "ssim");
  std::size_t side = std::min({p.window, a.height(), a.width()});
  if (side % 2 == 0) --side;

  std::vector<double> profile(side);
  const auto radius = static_cast<std::ptrdiff_t>(side / 2);
  double total = 0.0;
  for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
    const double x = static_cast<double>(i) / p.window_sigma;
    profile[static_cast<std::size_t>(i + radius)] = std::exp(-0.5 * x * x);
    total += profile[static_cast<std::size_t>(i + radius)];
  }
  for (double& w : profile) w /= total;

  const double range = p.dynamic_range > 0.0 ? p.dynamic_range : a.peak();
  const double c1 = (p.k1 * range) * (p.k1 * range);
  const double c2 = (p.k2 * range) * (p.k2 * range);

  const std::vector<double> mu_a = valid_filter(a, profile);
  const std::vector<double> mu_b = valid_filter(b, profile);
  const std::vector<double> aa = valid_filter(elementwise_product(a, a), profile);
  const std::vector<double> bb = valid_filter(elementwise_product(b, b), profile);
  const std::vector<double> ab = valid_filter(elementwise_product(a, b), profile);

  double sum = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double var_a = aa[i] - ma * ma;
    const double var_b = bb[i] - mb * mb;
    const double cov = ab[i] - ma * mb;
    sum += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) / ((ma * ma + mb * mb + c1) * (var_a + var_b + c2));
  }
  return sum / static_cast<double>(mu_a.size());
}

ContractionReport contraction_report(const IterationTrace& trace, const Image& x_star) {
  if (trace.iterates.empty()) throw DomainError("contraction report needs a nonempty trace");
  ContractionReport report;
  for (const Image& x : trace.iterates) report.noise_norms.push_back(l2_distance(x, x_star));
  for (std::size_t t = 0; t + 1 < report.noise_norms.size(); ++t) {
    if (!(report.noise_norms[t] > 0.0)) break;
    report.ratios.push_back(report.noise_norms[t + 1] / report.noise_norms[t]);
  }
  report.monotone = !report.ratios.empty();
  for (double q : report.ratios) {
    report.max_q = std::max(report.max_q, q);
    if (!(q < 1.0)) report.monotone = false;
  }
  return report;
}

double measure_noise_contraction(const DenoiserEngine& engine, const Image& clean, double sigma,
                                 std::uint64_t first_seed, std::size_t seeds) {
  if (seeds == 0) throw DomainError("need at least one seed");
  double out_total = 0.0;
  double in_total = 0.0;
  for (std::size_t s = 0; s < seeds; ++s) {
    const Image noisy = add_awgn(clean, sigma, first_seed + s);
    in_total += l2_distance(noisy, clean);
    out_total += l2_distance(engine.denoise(noisy), clean);
  }
  return out_total / in_total;
}

double total_variation(const Image& img) {
  double tv = 0.0;
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t c = 0; c < img.width(); ++c) {
      if (c + 1 < img.width()) tv += std::fabs(img(r, c + 1) - img(r, c));
      if (r + 1 < img.height()) tv += std::fabs(img(r + 1, c) - img(r, c));
    }
  }
  return tv;
}

}  // namespace btb
