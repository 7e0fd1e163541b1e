#include "btb/noise.hpp"

#include <string>

#include "btb/random.hpp"

namespace btb {
namespace {

std::uint32_t stream_id(std::size_t index) { return static_cast<std::uint32_t>(index); }

double speckle_draw(RandomStream& rng, double mean) {
  const auto [a, b] = rng.normal_pair();
  return 0.5 * mean * (a * a + b * b);
}

}  // namespace

NoiseSpec parse_noise_spec(std::string_view text, std::uint64_t seed) {
  NoiseSpec spec;
  spec.seed = seed;
  const auto colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  if (kind == "awgn") {
    spec.kind = NoiseKind::Awgn;
    if (colon == std::string_view::npos) throw ConfigError("awgn noise needs a sigma, e.g. awgn:25");
    const std::string value(text.substr(colon + 1));
    std::size_t used = 0;
    try {
      spec.sigma = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) throw ConfigError("bad awgn sigma '" + value + "'");
    if (!(spec.sigma >= 0.0)) throw ConfigError("awgn sigma must be nonnegative");
  } else if (kind == "poisson" || kind == "speckle") {
    if (colon != std::string_view::npos) throw ConfigError(std::string(kind) + " noise takes no parameter");
    spec.kind = kind == "poisson" ? NoiseKind::Poisson : NoiseKind::Speckle;
  } else {
    throw ConfigError("unknown noise kind '" + std::string(kind) + "'");
  }
  return spec;
}

Image add_awgn(const Image& img, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw DomainError("awgn sigma must be nonnegative");
  Image out = img;
  if (sigma == 0.0) return out;
  auto px = out.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    RandomStream rng(seed, StreamTag::Awgn, stream_id(i));
    px[i] += sigma * rng.normal();
  }
  return out;
}

Image add_poisson(const Image& img, std::uint64_t seed) {
  Image out = img;
  auto px = out.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (px[i] < 0.0) throw DomainError("poisson noise needs nonnegative pixels (pixel " + std::to_string(i) + ")");
    RandomStream rng(seed, StreamTag::Poisson, stream_id(i));
    px[i] = static_cast<double>(rng.poisson(px[i]));
  }
  return out;
}

Image add_speckle(const Image& img, std::uint64_t seed) {
  Image out = img;
  auto px = out.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (px[i] < 0.0) throw DomainError("speckle needs nonnegative mean intensities");
    RandomStream rng(seed, StreamTag::Speckle, stream_id(i));
    px[i] = speckle_draw(rng, px[i]);
  }
  return out;
}

Image apply_noise(const Image& img, const NoiseSpec& spec) {
  switch (spec.kind) {
    case NoiseKind::Awgn:
      return add_awgn(img, spec.sigma, spec.seed);
    case NoiseKind::Poisson:
      return add_poisson(img, spec.seed);
    case NoiseKind::Speckle:
      return add_speckle(img, spec.seed);
  }
  return img;
}

std::vector<double> sample_speckle_intensity(double mean_x, std::size_t n, std::uint64_t seed) {
  if (!(mean_x > 0.0)) throw DomainError("speckle mean must be positive");
  if (n == 0) throw DomainError("speckle sample count must be positive");
  std::vector<double> out(n);
  RandomStream rng(seed, StreamTag::Speckle, 0);
  for (auto& v : out) v = speckle_draw(rng, mean_x);
  return out;
}

}  // namespace btb
