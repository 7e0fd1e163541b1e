#include "btb/io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace btb {
namespace {

constexpr char kRawMagic[4] = {'B', 'T', 'B', 'F'};
constexpr std::size_t kRawHeaderBytes = 4 + 4 + 4 + 8;
constexpr unsigned char kPngSignature[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

bool starts_with(const std::vector<unsigned char>& bytes, const void* magic, std::size_t n) {
  return bytes.size() >= n && std::memcmp(bytes.data(), magic, n) == 0;
}

template <typename T>
void put_le(std::vector<unsigned char>& out, T value) {
  std::uint64_t bits = 0;
  if constexpr (sizeof(T) == 8) {
    bits = std::bit_cast<std::uint64_t>(value);
  } else {
    bits = static_cast<std::uint32_t>(value);
  }
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<unsigned char>((bits >> (8 * i)) & 0xffu));
}

std::uint64_t get_le(const unsigned char* p, std::size_t n) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

// ---- Netpbm ----

struct PnmHeader {
  std::size_t width = 0;
  std::size_t height = 0;
  unsigned maxval = 0;
  std::size_t data_offset = 0;
};

class PnmCursor {
 public:
  explicit PnmCursor(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t number(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    std::size_t value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
      if (value > (1u << 30)) throw FormatError(std::string("PNM ") + what + " too large", start);
      ++pos_;
    }
    if (pos_ == start) throw FormatError(std::string("PNM header: expected ") + what, start);
    return value;
  }

  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }
  bool at_space() const { return pos_ < bytes_.size() && std::isspace(bytes_[pos_]); }

 private:
  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 2;
};

PnmHeader parse_pnm_header(const std::vector<unsigned char>& bytes) {
  PnmCursor cur(bytes);
  PnmHeader h;
  h.width = cur.number("width");
  h.height = cur.number("height");
  const std::size_t maxval_at = cur.pos();
  const std::size_t maxval = cur.number("maxval");
  if (h.width == 0 || h.height == 0) throw FormatError("PNM header: zero dimension", maxval_at);
  if (maxval == 0 || maxval > 255) throw FormatError("PNM header: only 8-bit maxval is supported", maxval_at);
  if (!cur.at_space()) throw FormatError("PNM header: expected whitespace after maxval", cur.pos());
  cur.advance();
  h.maxval = static_cast<unsigned>(maxval);
  h.data_offset = cur.pos();
  return h;
}

Image decode_pgm(const std::vector<unsigned char>& bytes) {
  const PnmHeader h = parse_pnm_header(bytes);
  const std::size_t n = h.width * h.height;
  if (bytes.size() < h.data_offset + n) throw FormatError("PGM: truncated pixel data", bytes.size());
  std::vector<double> data(n);
  for (std::size_t i = 0; i < n; ++i) data[i] = bytes[h.data_offset + i];
  return Image(h.height, h.width, std::move(data), static_cast<double>(h.maxval));
}

ColorPlanes decode_ppm(const std::vector<unsigned char>& bytes) {
  const PnmHeader h = parse_pnm_header(bytes);
  const std::size_t n = h.width * h.height;
  if (bytes.size() < h.data_offset + 3 * n) throw FormatError("PPM: truncated pixel data", bytes.size());
  ColorPlanes planes;
  for (int c = 0; c < 3; ++c) planes[c] = Image(h.height, h.width, static_cast<double>(h.maxval));
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) planes[c].pixels()[i] = bytes[h.data_offset + 3 * i + c];
  }
  return planes;
}

unsigned char quantize(double v, double peak) {
  if (!(v > 0.0)) return 0;
  if (v >= peak) return 255;
  return static_cast<unsigned char>(std::lround(v / peak * 255.0));
}

// ---- PNG ----

struct PngPixels {
  std::size_t width = 0;
  std::size_t height = 0;
  bool color = false;
  std::vector<unsigned char> bytes;  // gray or interleaved RGB
};

PngPixels decode_png(const std::filesystem::path& path, bool want_rgb) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
    throw FormatError(std::string("PNG: ") + image.message, 0);
  }
  PngPixels px;
  px.color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  const bool rgb = want_rgb || px.color;
  image.format = rgb ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  px.width = image.width;
  px.height = image.height;
  px.bytes.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, px.bytes.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw FormatError("PNG: " + msg, 0);
  }
  return px;
}

void encode_png(const std::filesystem::path& path, std::size_t height, std::size_t width, bool rgb,
                const std::vector<unsigned char>& bytes) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = rgb ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, bytes.data(), 0, nullptr)) {
    throw IoError("PNG write failed for " + path.string() + ": " + image.message);
  }
}

// ---- raw float ----

Image decode_raw(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < kRawHeaderBytes) throw FormatError("raw-float: truncated header", bytes.size());
  const auto height = static_cast<std::size_t>(get_le(bytes.data() + 4, 4));
  const auto width = static_cast<std::size_t>(get_le(bytes.data() + 8, 4));
  if (height == 0) throw FormatError("raw-float: zero height", 4);
  if (width == 0) throw FormatError("raw-float: zero width", 8);
  const double peak = std::bit_cast<double>(get_le(bytes.data() + 12, 8));
  if (!(peak > 0.0) || !std::isfinite(peak)) throw FormatError("raw-float: peak must be positive", 12);
  const std::size_t n = height * width;
  if (bytes.size() < kRawHeaderBytes + 8 * n) throw FormatError("raw-float: truncated pixel data", bytes.size());
  std::vector<double> data(n);
  for (std::size_t i = 0; i < n; ++i) {
    data[i] = std::bit_cast<double>(get_le(bytes.data() + kRawHeaderBytes + 8 * i, 8));
    if (!std::isfinite(data[i])) throw FormatError("raw-float: non-finite value", kRawHeaderBytes + 8 * i);
  }
  return Image(height, width, std::move(data), peak);
}

std::vector<unsigned char> encode_raw(const Image& img) {
  std::vector<unsigned char> out;
  out.reserve(kRawHeaderBytes + 8 * img.size());
  out.insert(out.end(), std::begin(kRawMagic), std::end(kRawMagic));
  put_le(out, static_cast<std::uint32_t>(img.height()));
  put_le(out, static_cast<std::uint32_t>(img.width()));
  put_le(out, img.peak());
  for (double v : img.pixels()) put_le(out, v);
  return out;
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

}  // namespace

ImageFormat format_from_extension(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return ImageFormat::Pgm;
  if (ext == ".png") return ImageFormat::Png;
  return ImageFormat::RawFloat;
}

Image load_image(const std::filesystem::path& path) {
  const std::vector<unsigned char> bytes = read_file(path);
  if (starts_with(bytes, kRawMagic, 4)) return decode_raw(bytes);
  if (starts_with(bytes, "P5", 2)) return decode_pgm(bytes);
  if (starts_with(bytes, kPngSignature, 8)) {
    const PngPixels px = decode_png(path, false);
    const std::size_t n = px.width * px.height;
    std::vector<double> data(n);
    if (px.color) {
      for (std::size_t i = 0; i < n; ++i) {
        data[i] = 0.299 * px.bytes[3 * i] + 0.587 * px.bytes[3 * i + 1] + 0.114 * px.bytes[3 * i + 2];
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) data[i] = px.bytes[i];
    }
    return Image(px.height, px.width, std::move(data), 255.0);
  }
  if (starts_with(bytes, "P6", 2)) throw FormatError("color PPM given where a grayscale image is expected", 0);
  throw FormatError("unrecognized image format", 0);
}

void save_image(const Image& img, const std::filesystem::path& path, ImageFormat format) {
  switch (format) {
    case ImageFormat::RawFloat:
      write_file(path, encode_raw(img));
      return;
    case ImageFormat::Pgm: {
      const std::string header = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
      std::vector<unsigned char> out(header.begin(), header.end());
      for (double v : img.pixels()) out.push_back(quantize(v, img.peak()));
      write_file(path, out);
      return;
    }
    case ImageFormat::Png: {
      std::vector<unsigned char> px;
      px.reserve(img.size());
      for (double v : img.pixels()) px.push_back(quantize(v, img.peak()));
      encode_png(path, img.height(), img.width(), false, px);
      return;
    }
  }
}

void save_image(const Image& img, const std::filesystem::path& path) {
  save_image(img, path, format_from_extension(path));
}

ColorPlanes load_color_image(const std::filesystem::path& path) {
  const std::vector<unsigned char> bytes = read_file(path);
  if (starts_with(bytes, "P6", 2)) return decode_ppm(bytes);
  if (starts_with(bytes, kPngSignature, 8)) {
    const PngPixels px = decode_png(path, true);
    const std::size_t n = px.width * px.height;
    ColorPlanes planes;
    for (int c = 0; c < 3; ++c) {
      std::vector<double> data(n);
      for (std::size_t i = 0; i < n; ++i) data[i] = px.bytes[3 * i + c];
      planes[c] = Image(px.height, px.width, std::move(data), 255.0);
    }
    return planes;
  }
  const Image gray = load_image(path);
  return {gray, gray, gray};
}

void save_color_image(const ColorPlanes& rgb, const std::filesystem::path& path) {
  require_same_shape(rgb[0], rgb[1], "save_color_image");
  require_same_shape(rgb[0], rgb[2], "save_color_image");
  const std::size_t n = rgb[0].size();
  std::vector<unsigned char> px(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) px[3 * i + c] = quantize(rgb[c].pixels()[i], rgb[c].peak());
  }
  if (format_from_extension(path) == ImageFormat::Png) {
    encode_png(path, rgb[0].height(), rgb[0].width(), true, px);
    return;
  }
  const std::string header =
      "P6\n" + std::to_string(rgb[0].width()) + " " + std::to_string(rgb[0].height()) + "\n255\n";
  std::vector<unsigned char> out(header.begin(), header.end());
  out.insert(out.end(), px.begin(), px.end());
  write_file(path, out);
}

bool is_color_file(const std::filesystem::path& path) {
  const std::vector<unsigned char> bytes = read_file(path);
  if (starts_with(bytes, "P6", 2)) return true;
  if (starts_with(bytes, kPngSignature, 8)) return decode_png(path, false).color;
  return false;
}

}  // namespace btb
