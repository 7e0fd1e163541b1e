#pragma once

#include <array>
#include <filesystem>

#include "btb/image.hpp"

namespace btb {

enum class ImageFormat { Pgm, Png, RawFloat };

/// Guesses the format from the extension: .pgm/.ppm, .png, anything else is raw-float.
ImageFormat format_from_extension(const std::filesystem::path& path);

/// Reads an 8-bit PGM (P5), an 8-bit PNG or a raw-float ("BTBF") file,
/// sniffing the magic bytes. Color PNGs are reduced to BT.601 luma.
Image load_image(const std::filesystem::path& path);

/// 8-bit formats clamp to [0, peak] and quantize linearly to 0..255;
/// raw-float stores every value bit-exactly.
void save_image(const Image& img, const std::filesystem::path& path, ImageFormat format);
void save_image(const Image& img, const std::filesystem::path& path);

using ColorPlanes = std::array<Image, 3>;

/// Reads a binary PPM (P6), any 8-bit PNG, or a PGM (replicated to three planes) as R, G, B.
ColorPlanes load_color_image(const std::filesystem::path& path);
void save_color_image(const ColorPlanes& rgb, const std::filesystem::path& path);

/// True when the file holds three distinct color channels (P6 or color PNG).
bool is_color_file(const std::filesystem::path& path);

}  // namespace btb
