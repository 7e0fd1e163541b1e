#include <doctest.h>

#include <cstring>
#include <fstream>

#include "btb/color.hpp"
#include "btb/convolve.hpp"
#include "btb/io.hpp"
#include "support.hpp"

using namespace btb;
using btbtest::Pad;

TEST_CASE("image construction checks shape and peak") {
  CHECK_THROWS_AS(Image(0, 3), ShapeError);
  CHECK_THROWS_AS(Image(2, 2, std::vector<double>(3)), ShapeError);
  CHECK_THROWS_AS(Image(2, 2, -1.0), Error);
  Image img(2, 3, 1.0, 0.5);
  CHECK(img.size() == 6);
  CHECK(img(1, 2) == 0.5);
  CHECK(img.all_finite());
}

TEST_CASE("pad_index follows the half-sample mirror") {
  CHECK(pad_index(-1, 5, PaddingMode::Symmetric) == 0);
  CHECK(pad_index(-2, 5, PaddingMode::Symmetric) == 1);
  CHECK(pad_index(5, 5, PaddingMode::Symmetric) == 4);
  CHECK(pad_index(6, 5, PaddingMode::Symmetric) == 3);
  CHECK(pad_index(-12, 5, PaddingMode::Symmetric) == btbtest::reflect(-12, 5));
  CHECK(pad_index(-3, 1, PaddingMode::Symmetric) == 0);
  CHECK(pad_index(-1, 5, PaddingMode::Zero) == -1);
  CHECK(pad_index(9, 5, PaddingMode::Replicate) == 4);
}

TEST_CASE("relax is exact at fixed points") {
  const Image a = btbtest::random_image(7, 9, 1);
  CHECK(relax(a, 0.37, a) == a);
  const Image b = btbtest::random_image(7, 9, 2);
  const Image r = relax(a, 0.25, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(r.pixels()[i] == doctest::Approx(0.75 * a.pixels()[i] + 0.25 * b.pixels()[i]).epsilon(1e-12));
  }
}

TEST_CASE("kernel side must be odd") {
  CHECK_THROWS_AS(Kernel2D(2, std::vector<double>(4, 0.25)), ConfigError);
  CHECK_THROWS_AS(Kernel2D(3, std::vector<double>(8, 0.25)), Error);
}

TEST_CASE("identity kernel leaves the image alone") {
  const Image img = btbtest::random_image(6, 11, 3);
  CHECK(convolve2d(img, Kernel2D::identity()) == img);
}

TEST_CASE("normalized kernels preserve constants under every padding") {
  const Image c(9, 8, 255.0, 42.5);
  const auto w = btbtest::random_vector(25, 4, 0.0, 1.0);
  double total = 0.0;
  for (double x : w) total += x;
  std::vector<double> normalized(w);
  for (double& x : normalized) x /= total;
  const Kernel2D k(5, normalized);
  for (auto pad : {PaddingMode::Symmetric, PaddingMode::Replicate}) {
    CHECK(btbtest::max_abs_diff(convolve2d(c, k, pad), c) < 1e-12);
  }
  // Centered evaluation reproduces constants bit for bit.
  CHECK(centered_convolve2d(c, k, 1.0) == c);
}

TEST_CASE("convolve2d matches the nested-loop oracle") {
  const std::pair<PaddingMode, Pad> pads[] = {
      {PaddingMode::Symmetric, Pad::Symmetric}, {PaddingMode::Zero, Pad::Zero}, {PaddingMode::Replicate, Pad::Replicate}};
  for (std::uint64_t seed = 0; seed < 24; ++seed) {
    const std::size_t h = 1 + seed % 16;
    const std::size_t w = 1 + (seed * 7) % 16;
    const std::size_t side = 1 + 2 * (seed % 4);
    const Image img = btbtest::random_image(h, w, 100 + seed, -50.0, 200.0);
    const auto weights = btbtest::random_vector(side * side, 200 + seed);
    const Kernel2D k(side, weights);
    for (const auto& [mode, oracle_mode] : pads) {
      const Image got = convolve2d(img, k, mode);
      const Image want = btbtest::conv_oracle(img, weights, side, oracle_mode);
      CHECK(btbtest::max_abs_diff(got, want) <= 1e-12 * std::max(1.0, btbtest::max_abs(want)));
    }
    // Separable route.
    const auto profile = btbtest::random_vector(side, 300 + seed);
    const Kernel2D ks = Kernel2D::outer(profile);
    std::vector<double> full(ks.weights().begin(), ks.weights().end());
    const Image want = btbtest::conv_oracle(img, full, side, Pad::Symmetric);
    CHECK(btbtest::max_abs_diff(convolve2d(img, ks), want) <= 1e-12 * std::max(1.0, btbtest::max_abs(want)));
    // Centered form equals the plain one when total is the weight sum.
    CHECK(btbtest::max_abs_diff(centered_convolve2d(img, k, k.sum()), convolve2d(img, k)) <=
          1e-10 * std::max(1.0, btbtest::max_abs(want)));
  }
}

TEST_CASE("convolution is linear") {
  const Image a = btbtest::random_image(12, 10, 5);
  const Image b = btbtest::random_image(12, 10, 6);
  const Kernel2D k(3, btbtest::random_vector(9, 7));
  const Image lhs = convolve2d(axpby(2.5, a, -0.75, b), k);
  const Image rhs = axpby(2.5, convolve2d(a, k), -0.75, convolve2d(b, k));
  CHECK(btbtest::max_abs_diff(lhs, rhs) <= 1e-12 * btbtest::max_abs(rhs));
}

TEST_CASE("symmetric kernels commute with flips") {
  const Image img = btbtest::random_image(9, 13, 8);
  const std::vector<double> w = {1, 2, 1, 2, 4, 2, 1, 2, 1};
  const Kernel2D k(3, w);
  auto flip_h = [](const Image& x) {
    Image y = x;
    for (std::size_t r = 0; r < x.height(); ++r)
      for (std::size_t c = 0; c < x.width(); ++c) y(r, c) = x(r, x.width() - 1 - c);
    return y;
  };
  auto flip_v = [](const Image& x) {
    Image y = x;
    for (std::size_t r = 0; r < x.height(); ++r)
      for (std::size_t c = 0; c < x.width(); ++c) y(r, c) = x(x.height() - 1 - r, c);
    return y;
  };
  CHECK(btbtest::max_abs_diff(convolve2d(flip_h(img), k), flip_h(convolve2d(img, k))) < 1e-9);
  CHECK(btbtest::max_abs_diff(convolve2d(flip_v(img), k), flip_v(convolve2d(img, k))) < 1e-9);
}

namespace {

void write_bytes(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream f(p, std::ios::binary);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

std::string raw_header(std::uint32_t h, std::uint32_t w, double peak) {
  std::string s = "BTBF";
  s.append(reinterpret_cast<const char*>(&h), 4);
  s.append(reinterpret_cast<const char*>(&w), 4);
  s.append(reinterpret_cast<const char*>(&peak), 8);
  return s;
}

}  // namespace

TEST_CASE("pgm bytes map directly to pixels") {
  const auto dir = btbtest::temp_dir("pgm");
  std::string bytes = "P5\n2 2\n255\n";
  bytes += std::string{'\x00', '\x80', '\xff', '\x40'};
  write_bytes(dir / "a.pgm", bytes);
  const Image img = load_image(dir / "a.pgm");
  CHECK(img.height() == 2);
  CHECK(img.width() == 2);
  CHECK(img.peak() == 255.0);
  CHECK(img.pixels()[0] == 0.0);
  CHECK(img.pixels()[1] == 128.0);
  CHECK(img.pixels()[2] == 255.0);
  CHECK(img.pixels()[3] == 64.0);

  // Comments in the header are allowed.
  write_bytes(dir / "c.pgm", "P5\n# made by hand\n1 1\n255\n\x07");
  CHECK(load_image(dir / "c.pgm").pixels()[0] == 7.0);

  save_image(img, dir / "out.pgm");
  CHECK(read_bytes(dir / "out.pgm") == bytes);
}

TEST_CASE("8-bit export clamps and raw keeps every value") {
  const auto dir = btbtest::temp_dir("clamp");
  Image img(1, 3, 255.0);
  img.pixels()[0] = 300.2;
  img.pixels()[1] = -4.0;
  img.pixels()[2] = 99.6;
  save_image(img, dir / "x.pgm");
  const Image back = load_image(dir / "x.pgm");
  CHECK(back.pixels()[0] == 255.0);
  CHECK(back.pixels()[1] == 0.0);
  CHECK(back.pixels()[2] == 100.0);
  save_image(img, dir / "x.btbf");
  CHECK(load_image(dir / "x.btbf") == img);
}

TEST_CASE("raw-float header and 100 random round trips") {
  const auto dir = btbtest::temp_dir("raw");
  std::string bytes = raw_header(2, 3, 1.0);
  for (int i = 0; i < 6; ++i) {
    const double v = 0.1 * i;
    bytes.append(reinterpret_cast<const char*>(&v), 8);
  }
  write_bytes(dir / "h.btbf", bytes);
  const Image img = load_image(dir / "h.btbf");
  CHECK(img.height() == 2);
  CHECK(img.width() == 3);
  CHECK(img.peak() == 1.0);
  CHECK(img.pixels()[5] == 0.5);

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Image a = btbtest::random_image(1 + seed % 9, 1 + seed % 13, seed, -1e6, 1e6, 0.5 + static_cast<double>(seed));
    save_image(a, dir / "r.raw", ImageFormat::RawFloat);
    const Image b = load_image(dir / "r.raw");
    CHECK(b == a);
  }
}

TEST_CASE("malformed files raise format errors with offsets") {
  const auto dir = btbtest::temp_dir("bad");
  CHECK_THROWS_AS(load_image(dir / "missing.pgm"), IoError);

  std::string truncated = raw_header(2, 2, 1.0);
  const double v = 1.0;
  truncated.append(reinterpret_cast<const char*>(&v), 8);
  write_bytes(dir / "t.btbf", truncated);
  try {
    load_image(dir / "t.btbf");
    FAIL("expected a format error");
  } catch (const FormatError& e) {
    CHECK(e.offset() == 28);
  }

  write_bytes(dir / "n.btbf", raw_header(1, 1, 1.0) + std::string(8, '\xff'));
  CHECK_THROWS_AS(load_image(dir / "n.btbf"), FormatError);

  write_bytes(dir / "m.pgm", "P5\n2 x\n255\n");
  try {
    load_image(dir / "m.pgm");
    FAIL("expected a format error");
  } catch (const FormatError& e) {
    CHECK(e.offset() == 5);
  }

  write_bytes(dir / "w.pgm", "P5\n2 2\n65535\n");
  CHECK_THROWS_AS(load_image(dir / "w.pgm"), FormatError);
  write_bytes(dir / "s.pgm", "P5\n2 2\n255\nab");
  CHECK_THROWS_AS(load_image(dir / "s.pgm"), FormatError);
  write_bytes(dir / "z.dat", "GIF89a");
  CHECK_THROWS_AS(load_image(dir / "z.dat"), FormatError);
}

TEST_CASE("png round trip of 8-bit data") {
  const auto dir = btbtest::temp_dir("png");
  Image img(5, 7, 255.0);
  for (std::size_t i = 0; i < img.size(); ++i) img.pixels()[i] = static_cast<double>((i * 37) % 256);
  save_image(img, dir / "g.png");
  CHECK(load_image(dir / "g.png") == img);
  CHECK_FALSE(is_color_file(dir / "g.png"));

  ColorPlanes rgb{Image(3, 4, 255.0, 10.0), Image(3, 4, 255.0, 200.0), Image(3, 4, 255.0, 77.0)};
  save_color_image(rgb, dir / "c.png");
  CHECK(is_color_file(dir / "c.png"));
  const ColorPlanes back = load_color_image(dir / "c.png");
  for (int c = 0; c < 3; ++c) CHECK(back[c] == rgb[c]);
  save_color_image(rgb, dir / "c.ppm");
  const ColorPlanes back_ppm = load_color_image(dir / "c.ppm");
  for (int c = 0; c < 3; ++c) CHECK(back_ppm[c] == rgb[c]);
}

TEST_CASE("unwritable path is an io error") {
  CHECK_THROWS_AS(save_image(Image(1, 1), "/nonexistent_dir_btb/x.pgm"), IoError);
}

TEST_CASE("bt601 white, black and round trip") {
  auto convert = [](double r, double g, double b) {
    ColorPlanes p{Image(1, 1, 255.0, r), Image(1, 1, 255.0, g), Image(1, 1, 255.0, b)};
    return color_transform(p, ColorDirection::RgbToYcbcr);
  };
  const auto white = convert(255, 255, 255);
  CHECK(white[0].pixels()[0] == doctest::Approx(255.0).epsilon(1e-12));
  CHECK(white[1].pixels()[0] == doctest::Approx(128.0).epsilon(1e-12));
  CHECK(white[2].pixels()[0] == doctest::Approx(128.0).epsilon(1e-12));
  const auto black = convert(0, 0, 0);
  CHECK(black[0].pixels()[0] == 0.0);
  CHECK(black[1].pixels()[0] == doctest::Approx(128.0));
  CHECK(black[2].pixels()[0] == doctest::Approx(128.0));

  ColorPlanes rgb{btbtest::random_image(10, 100, 1), btbtest::random_image(10, 100, 2),
                  btbtest::random_image(10, 100, 3)};
  const ColorPlanes back = color_transform(color_transform(rgb, ColorDirection::RgbToYcbcr), ColorDirection::YcbcrToRgb);
  double worst = 0.0;
  for (int c = 0; c < 3; ++c) worst = std::max(worst, btbtest::max_abs_diff(back[c], rgb[c]));
  CHECK(worst < 1e-9);

  ColorPlanes bad{Image(2, 2), Image(2, 3), Image(2, 2)};
  CHECK_THROWS_AS(color_transform(bad, ColorDirection::RgbToYcbcr), ShapeError);
}
