#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "btb/convolve.hpp"
#include "btb/denoiser.hpp"
#include "btb/simd.hpp"

namespace btb {
namespace {

std::string format_number(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

std::map<std::string, std::string> parse_params(std::string_view text) {
  std::map<std::string, std::string> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw ConfigError("engine parameter '" + std::string(item) + "' must look like key=value");
    }
    out[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

double take_number(std::map<std::string, std::string>& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  double v = 0.0;
  try {
    std::size_t used = 0;
    v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ConfigError("bad value for engine parameter '" + key + "': " + it->second);
  }
  params.erase(it);
  return v;
}

std::size_t take_count(std::map<std::string, std::string>& params, const std::string& key, std::size_t fallback) {
  const double v = take_number(params, key, static_cast<double>(fallback));
  if (v < 0.0 || v != std::floor(v)) throw ConfigError("engine parameter '" + key + "' must be a nonnegative integer");
  return static_cast<std::size_t>(v);
}

void reject_leftovers(const std::map<std::string, std::string>& params, std::string_view engine) {
  if (!params.empty()) {
    throw ConfigError("unknown parameter '" + params.begin()->first + "' for engine " + std::string(engine));
  }
}

}  // namespace

void NlmParams::validate() const {
  if (patch_radius > search_radius) throw ConfigError("NLM patch radius must not exceed the search radius");
  if (!(h > 0.0)) throw ConfigError("NLM bandwidth h must be positive");
  if (!(sigma_est >= 0.0)) throw ConfigError("NLM sigma estimate must be nonnegative");
}

Image denoise_gaussian(const Image& img, double std_dev) {
  if (!(std_dev > 0.0)) throw ConfigError("gaussian engine std must be positive");
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * std_dev));
  std::vector<double> profile(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
    const double x = static_cast<double>(i) / std_dev;
    profile[static_cast<std::size_t>(i + radius)] = std::exp(-0.5 * x * x);
    total += profile[static_cast<std::size_t>(i + radius)];
  }
  for (double& w : profile) w /= total;
  return convolve_cols(convolve_rows(img, profile), profile);
}

Image denoise_median(const Image& img, std::size_t radius) {
  if (radius == 0) throw ConfigError("median radius must be at least 1");
  const auto h = static_cast<std::ptrdiff_t>(img.height());
  const auto w = static_cast<std::ptrdiff_t>(img.width());
  const auto r = static_cast<std::ptrdiff_t>(radius);
  Image out(img.height(), img.width(), img.peak());
  std::vector<double> window;
  window.reserve(static_cast<std::size_t>((2 * r + 1) * (2 * r + 1)));
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      window.clear();
      for (std::ptrdiff_t dy = -r; dy <= r; ++dy) {
        const auto sy = static_cast<std::size_t>(pad_index(y + dy, h, PaddingMode::Symmetric));
        for (std::ptrdiff_t dx = -r; dx <= r; ++dx) {
          window.push_back(img(sy, static_cast<std::size_t>(pad_index(x + dx, w, PaddingMode::Symmetric))));
        }
      }
      const auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
      std::nth_element(window.begin(), mid, window.end());
      out(static_cast<std::size_t>(y), static_cast<std::size_t>(x)) = *mid;
    }
  }
  return out;
}

Image denoise_nlm(const Image& img, const NlmParams& p) {
  p.validate();
  const auto& kt = simd::active();
  const std::size_t H = img.height();
  const std::size_t W = img.width();
  const auto pr = static_cast<std::ptrdiff_t>(p.patch_radius);
  const auto sr = static_cast<std::ptrdiff_t>(p.search_radius);
  const std::ptrdiff_t margin = pr + sr;
  const std::size_t PW = W + 2 * static_cast<std::size_t>(margin);
  const std::size_t PH = H + 2 * static_cast<std::size_t>(margin);

  // Symmetric-padded copy; padded(y + margin, x + margin) = img(y, x).
  std::vector<double> padded(PH * PW);
  for (std::size_t y = 0; y < PH; ++y) {
    const auto sy = static_cast<std::size_t>(
        pad_index(static_cast<std::ptrdiff_t>(y) - margin, static_cast<std::ptrdiff_t>(H), PaddingMode::Symmetric));
    for (std::size_t x = 0; x < PW; ++x) {
      const auto sx = static_cast<std::size_t>(pad_index(static_cast<std::ptrdiff_t>(x) - margin,
                                                         static_cast<std::ptrdiff_t>(W), PaddingMode::Symmetric));
      padded[y * PW + x] = img(sy, sx);
    }
  }

  const std::size_t patch = 2 * p.patch_radius + 1;
  const std::size_t EW = W + patch - 1;  // extended domain [-pr, W + pr)
  const std::size_t EH = H + patch - 1;
  const double inv_area = 1.0 / static_cast<double>(patch * patch);
  const double inv_h2 = 1.0 / (p.h * p.h);
  const double bias = 2.0 * p.sigma_est * p.sigma_est;
  const std::vector<double> ones(patch, 1.0);

  std::vector<double> diff(EH * EW);
  std::vector<double> row_box(EH * W);
  std::vector<double> dist(W);
  std::vector<double> wsum(H * W, 0.0);
  std::vector<double> vsum(H * W, 0.0);
  std::vector<double> wmax(H * W, 0.0);

  for (std::ptrdiff_t oy = -sr; oy <= sr; ++oy) {
    for (std::ptrdiff_t ox = -sr; ox <= sr; ++ox) {
      if (oy == 0 && ox == 0) continue;
      for (std::size_t ey = 0; ey < EH; ++ey) {
        const std::size_t base = (ey + static_cast<std::size_t>(sr)) * PW + static_cast<std::size_t>(sr);
        const double* a = padded.data() + base;
        const double* b = padded.data() + static_cast<std::ptrdiff_t>(base) + oy * static_cast<std::ptrdiff_t>(PW) + ox;
        kt.sq_diff(a, b, diff.data() + ey * EW, EW);
        kt.fir(diff.data() + ey * EW, W, ones.data(), patch, row_box.data() + ey * W);
      }
      for (std::size_t y = 0; y < H; ++y) {
        std::fill(dist.begin(), dist.end(), 0.0);
        for (std::size_t i = 0; i < patch; ++i) kt.accumulate_scaled(dist.data(), row_box.data() + (y + i) * W, 1.0, W);
        const double* neighbor = padded.data() + static_cast<std::ptrdiff_t>((y + static_cast<std::size_t>(margin)) * PW) +
                                 oy * static_cast<std::ptrdiff_t>(PW) + margin + ox;
        for (std::size_t x = 0; x < W; ++x) {
          const double d2 = dist[x] * inv_area;
          const double wgt = std::exp(-std::max(d2 - bias, 0.0) * inv_h2);
          const std::size_t i = y * W + x;
          wsum[i] += wgt;
          vsum[i] += wgt * neighbor[x];
          wmax[i] = std::max(wmax[i], wgt);
        }
      }
    }
  }

  Image out(H, W, img.peak());
  for (std::size_t i = 0; i < H * W; ++i) {
    const double v = img.pixels()[i];
    const double total = wsum[i] + wmax[i];
    out.pixels()[i] = total > 0.0 ? (vsum[i] + wmax[i] * v) / total : v;
  }
  return out;
}

GaussianEngine::GaussianEngine(double std_dev) : std_(std_dev) {
  if (!(std_dev > 0.0)) throw ConfigError("gaussian engine std must be positive");
}

std::string GaussianEngine::describe() const { return "gaussian:std=" + format_number(std_); }

MedianEngine::MedianEngine(std::size_t radius) : radius_(radius) {
  if (radius == 0) throw ConfigError("median radius must be at least 1");
}

std::string MedianEngine::describe() const { return "median:r=" + std::to_string(radius_); }

NlmEngine::NlmEngine(NlmParams params) : params_(params) { params_.validate(); }

std::string NlmEngine::describe() const {
  std::string s = "nlm:patch=" + std::to_string(params_.patch_radius) +
                  ",search=" + std::to_string(params_.search_radius) + ",h=" + format_number(params_.h);
  if (params_.sigma_est > 0.0) s += ",sigma=" + format_number(params_.sigma_est);
  return s;
}

AffineEngine::AffineEngine(Image fixed_point, double q) : fixed_point_(std::move(fixed_point)), q_(q) {}

Image AffineEngine::denoise(const Image& img) const {
  require_same_shape(img, fixed_point_, "affine engine");
  // x* + q (x - x*) = (1 - q) x* + q x
  return axpby(1.0 - q_, fixed_point_, q_, img);
}

std::string AffineEngine::describe() const { return "affine:q=" + format_number(q_); }

std::unique_ptr<DenoiserEngine> parse_engine(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string kind(spec.substr(0, colon));
  auto params = colon == std::string_view::npos ? std::map<std::string, std::string>{}
                                                : parse_params(spec.substr(colon + 1));
  if (kind == "gaussian") {
    const double s = take_number(params, "std", 1.0);
    reject_leftovers(params, kind);
    return std::make_unique<GaussianEngine>(s);
  }
  if (kind == "median") {
    const std::size_t r = take_count(params, "r", 1);
    reject_leftovers(params, kind);
    return std::make_unique<MedianEngine>(r);
  }
  if (kind == "nlm") {
    NlmParams p;
    p.patch_radius = take_count(params, "patch", p.patch_radius);
    p.search_radius = take_count(params, "search", p.search_radius);
    p.h = take_number(params, "h", p.h);
    p.sigma_est = take_number(params, "sigma", p.sigma_est);
    reject_leftovers(params, kind);
    return std::make_unique<NlmEngine>(p);
  }
  if (kind == "identity") {
    reject_leftovers(params, kind);
    return std::make_unique<IdentityEngine>();
  }
  throw ConfigError("unknown engine '" + kind + "'");
}

}  // namespace btb
