#pragma once

// Shared helpers and brute-force oracles. The oracles are written straight
// from the definitions and share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "btb/image.hpp"

namespace btbtest {

inline btb::Image random_image(std::size_t h, std::size_t w, std::uint64_t seed, double lo = 0.0, double hi = 255.0,
                               double peak = 255.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  btb::Image img(h, w, peak);
  for (double& v : img.pixels()) v = dist(rng);
  return img;
}

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

inline double max_abs_diff(const btb::Image& a, const btb::Image& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a.pixels()[i] - b.pixels()[i]));
  return m;
}

inline double max_abs(const btb::Image& a) {
  double m = 0.0;
  for (double v : a.pixels()) m = std::max(m, std::fabs(v));
  return m;
}

enum class Pad { Symmetric, Zero, Replicate };

// Half-sample mirror: ... 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
inline long reflect(long i, long n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - i - 1;
  }
  return i;
}

inline double sample(const btb::Image& img, long r, long c, Pad pad) {
  const long h = static_cast<long>(img.height());
  const long w = static_cast<long>(img.width());
  switch (pad) {
    case Pad::Zero:
      if (r < 0 || r >= h || c < 0 || c >= w) return 0.0;
      return img(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    case Pad::Replicate:
      return img(static_cast<std::size_t>(std::clamp(r, 0L, h - 1)), static_cast<std::size_t>(std::clamp(c, 0L, w - 1)));
    case Pad::Symmetric:
      break;
  }
  return img(static_cast<std::size_t>(reflect(r, h)), static_cast<std::size_t>(reflect(c, w)));
}

// out(r, c) = sum_{i,j} k(i, j) img(r + R - i, c + R - j)
inline btb::Image conv_oracle(const btb::Image& img, const std::vector<double>& k, std::size_t side, Pad pad) {
  const long R = static_cast<long>(side / 2);
  btb::Image out(img.height(), img.width(), img.peak());
  for (long r = 0; r < static_cast<long>(img.height()); ++r) {
    for (long c = 0; c < static_cast<long>(img.width()); ++c) {
      double acc = 0.0;
      for (long i = 0; i < static_cast<long>(side); ++i) {
        for (long j = 0; j < static_cast<long>(side); ++j) {
          acc += k[static_cast<std::size_t>(i * static_cast<long>(side) + j)] * sample(img, r + R - i, c + R - j, pad);
        }
      }
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = acc;
    }
  }
  return out;
}

inline btb::Image median_oracle(const btb::Image& img, std::size_t radius) {
  const long R = static_cast<long>(radius);
  btb::Image out(img.height(), img.width(), img.peak());
  for (long r = 0; r < static_cast<long>(img.height()); ++r) {
    for (long c = 0; c < static_cast<long>(img.width()); ++c) {
      std::vector<double> win;
      for (long i = -R; i <= R; ++i)
        for (long j = -R; j <= R; ++j) win.push_back(sample(img, r + i, c + j, Pad::Symmetric));
      std::sort(win.begin(), win.end());
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = win[win.size() / 2];
    }
  }
  return out;
}

// Quadratic-loop NLM: each pixel is the weighted mean of the centers of its
// search window; the pixel itself takes the largest weight of the others.
inline btb::Image nlm_oracle(const btb::Image& img, long patch_r, long search_r, double h, double sigma_est) {
  btb::Image out(img.height(), img.width(), img.peak());
  const double area = static_cast<double>((2 * patch_r + 1) * (2 * patch_r + 1));
  for (long r = 0; r < static_cast<long>(img.height()); ++r) {
    for (long c = 0; c < static_cast<long>(img.width()); ++c) {
      double wsum = 0.0, vsum = 0.0, wmax = 0.0;
      for (long dy = -search_r; dy <= search_r; ++dy) {
        for (long dx = -search_r; dx <= search_r; ++dx) {
          if (dy == 0 && dx == 0) continue;
          double d2 = 0.0;
          for (long py = -patch_r; py <= patch_r; ++py) {
            for (long px = -patch_r; px <= patch_r; ++px) {
              const double a = sample(img, r + py, c + px, Pad::Symmetric);
              const double b = sample(img, r + dy + py, c + dx + px, Pad::Symmetric);
              d2 += (a - b) * (a - b);
            }
          }
          d2 /= area;
          const double w = std::exp(-std::max(d2 - 2.0 * sigma_est * sigma_est, 0.0) / (h * h));
          wsum += w;
          vsum += w * sample(img, r + dy, c + dx, Pad::Symmetric);
          wmax = std::max(wmax, w);
        }
      }
      const double self = img(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
      const double total = wsum + wmax;
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = total > 0.0 ? (vsum + wmax * self) / total : self;
    }
  }
  return out;
}

// sigma(r, c) = sqrt(sum_{i,j} w(i, j) v(r + R - i, c + R - j)^2), symmetric padding.
inline btb::Image energy_oracle(const btb::Image& v, const std::vector<double>& w, std::size_t side) {
  btb::Image sq = v;
  for (double& x : sq.pixels()) x = x * x;
  btb::Image e = conv_oracle(sq, w, side, Pad::Symmetric);
  for (double& x : e.pixels()) x = std::sqrt(std::max(x, 0.0));
  return e;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("btb_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path corpus_dir() { return std::filesystem::path(BTB_SOURCE_DIR) / "data" / "corpus"; }

}  // namespace btbtest
