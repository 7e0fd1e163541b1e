#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace btb {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123). Stateless:
/// every output block is a pure function of (key, counter), so per-pixel
/// streams can be drawn in any order with identical results.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(std::uint64_t seed) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}
  explicit Philox4x32(Key key) noexcept : key_(key) {}

  Block operator()(Block counter) const noexcept;

 private:
  Key key_;
};

/// Stream tags keep the draws of different consumers disjoint for one seed.
enum class StreamTag : std::uint32_t {
  Awgn = 1,
  Poisson = 2,
  Speckle = 3,
  Scatterers = 4,
  Langevin = 0x100,  // + iteration index
};

/// Sequential reader over one Philox stream. Counter layout:
/// word0/word1 = block index, word2 = stream id, word3 = tag.
///
/// Version 1 conventions (fixed; reimplementations must match):
///  - uniform(): top 53 bits of a 64-bit draw (word pair lo | hi << 32), mapped to (0, 1)
///    as (bits + 0.5) / 2^53;
///  - normal(): Box-Muller, sqrt(-2 ln u1) * cos(2 pi u2), one value per two uniforms;
///  - normal_pair(): the (cos, sin) pair from the same two uniforms.
class RandomStream {
 public:
  static constexpr int kVersion = 1;

  RandomStream(std::uint64_t seed, std::uint32_t tag, std::uint32_t stream) noexcept
      : gen_(seed), tag_(tag), stream_(stream) {}
  RandomStream(std::uint64_t seed, StreamTag tag, std::uint32_t stream) noexcept
      : RandomStream(seed, static_cast<std::uint32_t>(tag), stream) {}

  std::uint64_t next_u64() noexcept;
  double uniform() noexcept;
  double normal() noexcept;
  std::pair<double, double> normal_pair() noexcept;
  /// Knuth's product method below mean 10, Hoermann's PTRS above.
  std::uint64_t poisson(double mean) noexcept;

 private:
  Philox4x32 gen_;
  std::uint32_t tag_;
  std::uint32_t stream_;
  std::uint64_t block_index_ = 0;
  Philox4x32::Block buffer_{};
  int buffered_ = 0;  // remaining u64 values in buffer_
};

}  // namespace btb
