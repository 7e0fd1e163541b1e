#include <doctest.h>

#include <cmath>
#include <limits>

#include "btb/denoiser.hpp"
#include "btb/metrics.hpp"
#include "support.hpp"

using namespace btb;

TEST_CASE("psnr basics") {
  const Image a = btbtest::random_image(20, 30, 1);
  CHECK(psnr(a, a) == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(psnr(a, Image(20, 29)), ShapeError);
  CHECK_THROWS_AS(psnr(a, Image(20, 30, 1.0)), DomainError);

  Image b = a;
  for (double& x : b.pixels()) x += 5.0;
  CHECK(psnr(a, b) == doctest::Approx(10.0 * std::log10(255.0 * 255.0 / 25.0)).epsilon(1e-12));
  CHECK(psnr(a, b) == psnr(b, a));
}

TEST_CASE("psnr is invariant to a common rescale") {
  const Image a = btbtest::random_image(16, 16, 2);
  const Image b = btbtest::random_image(16, 16, 3);
  for (double s : {1.0 / 255.0, 4.0, 1e3}) {
    Image as(16, 16, 255.0 * s), bs(16, 16, 255.0 * s);
    for (std::size_t i = 0; i < a.size(); ++i) {
      as.pixels()[i] = a.pixels()[i] * s;
      bs.pixels()[i] = b.pixels()[i] * s;
    }
    CHECK(std::fabs(psnr(as, bs) - psnr(a, b)) < 1e-9);
  }
}

TEST_CASE("quantized psnr") {
  Image a(4, 4, 255.0, 100.0);
  Image b(4, 4, 255.0, 100.4);
  CHECK(psnr(a, b, true) == std::numeric_limits<double>::infinity());
  b.pixels()[0] = 300.0;  // clamps to 255
  a.pixels()[0] = 255.0;
  CHECK(psnr(a, b, true) == std::numeric_limits<double>::infinity());
  const Image q = quantize_8bit(Image(1, 3, std::vector<double>{-3.0, 0.4999, 0.6}, 1.0));
  CHECK(q.pixels()[0] == 0.0);
  CHECK(q.pixels()[1] == doctest::Approx(127.0 / 255.0));
  CHECK(q.pixels()[2] == doctest::Approx(153.0 / 255.0));
}

TEST_CASE("ssim") {
  const Image a = btbtest::random_image(40, 40, 4);
  CHECK(ssim(a, a) == 1.0);
  Image inv = a;
  for (double& x : inv.pixels()) x = 255.0 - x;
  CHECK(ssim(a, inv) < 0.1);
  const Image b = btbtest::random_image(40, 40, 5);
  CHECK(std::fabs(ssim(a, b) - ssim(b, a)) < 1e-12);
  CHECK(ssim(a, b) < 0.2);
  // Smaller than the window: still defined.
  const Image s = btbtest::random_image(6, 9, 6);
  CHECK(ssim(s, s) == 1.0);
  CHECK_THROWS_AS(ssim(a, s), ShapeError);

  SsimParams p;
  p.window = 10;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.k2 = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("total variation") {
  const Image img(2, 3, std::vector<double>{0, 1, 3, 2, 2, 2}, 255.0);
  // horizontal 1 + 2 + 0 + 0, vertical 2 + 1 + 1
  CHECK(total_variation(img) == 7.0);
  CHECK(total_variation(Image(5, 5, 1.0, 0.3)) == 0.0);
}

TEST_CASE("contraction report") {
  IterationTrace t;
  const Image star(2, 2, 1.0, 0.0);
  CHECK_THROWS_AS(contraction_report(t, star), DomainError);
  for (double v : {8.0, 4.0, 1.0, 0.0, 0.0}) t.iterates.emplace_back(2, 2, 1.0, v);
  const ContractionReport r = contraction_report(t, star);
  REQUIRE(r.noise_norms.size() == 5);
  CHECK(r.noise_norms[0] == 16.0);
  REQUIRE(r.ratios.size() == 3);
  CHECK(r.ratios[0] == 0.5);
  CHECK(r.ratios[1] == 0.25);
  CHECK(r.ratios[2] == 0.0);
  CHECK(r.max_q == 0.5);
  CHECK(r.monotone);

  IterationTrace grow;
  for (double v : {1.0, 2.0}) grow.iterates.emplace_back(2, 2, 1.0, v);
  const ContractionReport g = contraction_report(grow, star);
  CHECK(g.max_q == 2.0);
  CHECK_FALSE(g.monotone);
}

TEST_CASE("noise contraction of the affine engine") {
  const Image clean = btbtest::random_image(32, 32, 7);
  AffineEngine f(clean, 0.4);
  CHECK(measure_noise_contraction(f, clean, 10.0, 1, 5) == doctest::Approx(0.4).epsilon(1e-9));
}
