#pragma once

#include "btb/io.hpp"

namespace btb {

enum class ColorDirection { RgbToYcbcr, YcbcrToRgb };

/// BT.601 full-range (JPEG) conversion, chroma centered at 128. Works on the
/// continuous values; nothing is rounded.
ColorPlanes color_transform(const ColorPlanes& planes, ColorDirection direction);

}  // namespace btb
