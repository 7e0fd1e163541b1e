#include "btb/color.hpp"

namespace btb {
namespace {

constexpr double kR = 0.299;
constexpr double kG = 0.587;
constexpr double kB = 0.114;
constexpr double kChromaOffset = 128.0;
// Chroma scale factors 2(1 - kB) and 2(1 - kR); inverting through them (rather
// than through rounded matrix entries) keeps the round trip exact to rounding.
constexpr double kCbScale = 2.0 * (1.0 - kB);
constexpr double kCrScale = 2.0 * (1.0 - kR);

}  // namespace

ColorPlanes color_transform(const ColorPlanes& planes, ColorDirection direction) {
  require_same_shape(planes[0], planes[1], "color_transform");
  require_same_shape(planes[0], planes[2], "color_transform");
  ColorPlanes out = planes;
  const std::size_t n = planes[0].size();
  const auto a = planes[0].pixels();
  const auto b = planes[1].pixels();
  const auto c = planes[2].pixels();
  auto o0 = out[0].pixels();
  auto o1 = out[1].pixels();
  auto o2 = out[2].pixels();
  if (direction == ColorDirection::RgbToYcbcr) {
    for (std::size_t i = 0; i < n; ++i) {
      const double y = kR * a[i] + kG * b[i] + kB * c[i];
      o0[i] = y;
      o1[i] = (c[i] - y) / kCbScale + kChromaOffset;
      o2[i] = (a[i] - y) / kCrScale + kChromaOffset;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double y = a[i];
      const double r = y + kCrScale * (c[i] - kChromaOffset);
      const double bl = y + kCbScale * (b[i] - kChromaOffset);
      o0[i] = r;
      o1[i] = (y - kR * r - kB * bl) / kG;
      o2[i] = bl;
    }
  }
  return out;
}

}  // namespace btb
