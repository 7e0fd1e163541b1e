#include "btb/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "btb/io.hpp"
#include "btb/metrics.hpp"

namespace btb {
namespace fs = std::filesystem;

namespace {

bool is_image_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".pgm" || ext == ".ppm" || ext == ".pnm" || ext == ".png" || ext == ".btbf";
}

void write_number(std::ostream& out, double v) {
  if (std::isinf(v)) {
    out << (v > 0 ? "inf" : "-inf");
  } else {
    out << v;
  }
}

}  // namespace

std::vector<fs::path> list_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_extension(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    if (a.stem() != b.stem()) return a.stem().string() < b.stem().string();
    return a.string() < b.string();
  });
  return files;
}

std::uint64_t image_seed(std::uint64_t base, const std::string& stem) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : stem) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return base ^ h;
}

std::size_t worker_count(std::size_t jobs) {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BTB_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
  }
  return std::max<std::size_t>(1, std::min(n, jobs));
}

std::vector<BenchmarkRow> run_benchmark(const std::vector<fs::path>& images, const NoiseSpec& noise,
                                        const BenchMethod& method) {
  if (method.id.find(',') != std::string::npos) throw ConfigError("method id must not contain commas");
  std::vector<BenchmarkRow> rows(images.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= images.size()) return;
      try {
        const std::string stem = images[i].stem().string();
        const Image clean = load_image(images[i]);
        NoiseSpec spec = noise;
        spec.seed = image_seed(noise.seed, stem);
        const Image noisy = apply_noise(clean, spec);

        const auto start = std::chrono::steady_clock::now();
        MethodResult result = method.run(noisy, spec.seed);
        const auto stop = std::chrono::steady_clock::now();

        BenchmarkRow& row = rows[i];
        row.image = stem;
        row.method = method.id;
        row.psnr_in = psnr(clean, noisy);
        row.ssim_in = ssim(clean, noisy);
        row.psnr_out = psnr(clean, result.output);
        row.ssim_out = ssim(clean, result.output);
        row.iters = std::max<std::size_t>(1, result.iters);
        row.ms = std::chrono::duration<double, std::milli>(stop - start).count();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(images.size());
        return;
      }
    }
  };

  const std::size_t workers = worker_count(images.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

BenchmarkRow average_row(const std::vector<BenchmarkRow>& rows) {
  if (rows.empty()) throw DomainError("no rows to average");
  BenchmarkRow avg;
  avg.image = "average";
  avg.method = rows.front().method;
  double iters = 0.0;
  for (const auto& r : rows) {
    avg.psnr_in += r.psnr_in;
    avg.ssim_in += r.ssim_in;
    avg.psnr_out += r.psnr_out;
    avg.ssim_out += r.ssim_out;
    iters += static_cast<double>(r.iters);
    avg.ms += r.ms;
  }
  const double n = static_cast<double>(rows.size());
  avg.psnr_in /= n;
  avg.ssim_in /= n;
  avg.psnr_out /= n;
  avg.ssim_out /= n;
  avg.ms /= n;
  avg.iters = static_cast<std::size_t>(std::lround(iters / n));
  return avg;
}

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows) {
  const auto old_precision = out.precision(12);
  out << "image,method,psnr_in,ssim_in,psnr_out,ssim_out,iters,ms\n";
  auto line = [&](const BenchmarkRow& r, double iters) {
    out << r.image << ',' << r.method << ',';
    write_number(out, r.psnr_in);
    out << ',' << r.ssim_in << ',';
    write_number(out, r.psnr_out);
    out << ',' << r.ssim_out << ',' << iters << ',' << r.ms << '\n';
  };
  double iters = 0.0;
  for (const auto& r : rows) {
    line(r, static_cast<double>(r.iters));
    iters += static_cast<double>(r.iters);
  }
  if (!rows.empty()) line(average_row(rows), iters / static_cast<double>(rows.size()));
  out.precision(old_precision);
}

}  // namespace btb
