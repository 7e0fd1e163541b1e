#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "btb/image.hpp"
#include "btb/noise.hpp"

namespace btb {

struct BenchmarkRow {
  std::string image;
  std::string method;
  double psnr_in = 0.0;
  double ssim_in = 0.0;
  double psnr_out = 0.0;
  double ssim_out = 0.0;
  std::size_t iters = 1;
  double ms = 0.0;
};

struct MethodResult {
  Image output;
  std::size_t iters = 1;
};

/// A restoration method under test. `run` receives the noisy image and the
/// per-image seed; it must be safe to call from several threads at once.
struct BenchMethod {
  std::string id;  // no commas
  std::function<MethodResult(const Image& noisy, std::uint64_t seed)> run;
};

/// Image files (pgm/ppm/pnm/png/btbf) directly inside `dir`, sorted by stem.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

/// Deterministic per-image seed derived from the base seed and the file stem.
std::uint64_t image_seed(std::uint64_t base, const std::string& stem);

/// Corrupts every image with `noise` (seeded per image), restores it and
/// scores both against the clean image. Rows come back in input order.
/// Worker count: hardware threads, capped by the BTB_THREADS variable.
std::vector<BenchmarkRow> run_benchmark(const std::vector<std::filesystem::path>& images, const NoiseSpec& noise,
                                        const BenchMethod& method);

/// Arithmetic mean of every numeric column; image id "average".
BenchmarkRow average_row(const std::vector<BenchmarkRow>& rows);

/// Header, one line per row, then the averages row.
void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows);

std::size_t worker_count(std::size_t jobs);

}  // namespace btb
