#include "btb/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "btb/convolve.hpp"
#include "btb/random.hpp"

namespace btb {
namespace {

constexpr double kDbEpsilon = 1e-12;
constexpr double kReferencePercentile = 0.999;
const double kFwhmToSigma = 1.0 / (2.0 * std::sqrt(2.0 * std::numbers::ln2));

// Resolution FWHMs describe the intensity PSF |a|^2; the amplitude profile is
// sqrt(2) wider.
double amplitude_sigma_px(double intensity_fwhm, double pitch) {
  return intensity_fwhm * kFwhmToSigma * std::numbers::sqrt2 / pitch;
}

std::vector<double> gaussian_profile(double sigma_px) {
  const auto radius = static_cast<std::ptrdiff_t>(std::max(1.0, std::ceil(3.0 * sigma_px)));
  std::vector<double> p(static_cast<std::size_t>(2 * radius + 1));
  for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
    const double x = static_cast<double>(i) / sigma_px;
    p[static_cast<std::size_t>(i + radius)] = std::exp(-0.5 * x * x);
  }
  return p;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& value, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("scene line " + std::to_string(line) + ": bad number for '" + key + "': " + value);
  }
}

std::size_t to_size(const std::string& key, const std::string& value, std::size_t line) {
  const double v = to_double(key, value, line);
  if (v < 0.0 || v != std::floor(v)) {
    throw ConfigError("scene line " + std::to_string(line) + ": '" + key + "' must be a nonnegative integer");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

double SceneConfig::axial_fwhm() const {
  if (psf_axial_fwhm) return *psf_axial_fwhm;
  // nm^2 / nm = nm; report microns.
  return 2.0 * std::numbers::ln2 / std::numbers::pi * lambda_c * lambda_c / delta_lambda * 1e-3;
}

void SceneConfig::validate() const {
  if (height == 0 || width == 0) throw ConfigError("scene dimensions must be positive");
  if (!(axial_pitch > 0.0) || !(lateral_pitch > 0.0)) throw ConfigError("pixel pitches must be positive");
  if (!(lambda_c > 0.0) || !(delta_lambda > 0.0)) throw ConfigError("source wavelengths must be positive");
  if (!(axial_fwhm() > 0.0) || !(psf_lateral_fwhm > 0.0)) throw ConfigError("PSF widths must be positive");
  if (!(db_floor < db_ceil)) throw ConfigError("db_floor must be below db_ceil");
  for (const auto& layer : layers) {
    if (!(layer.density > 0.0 && layer.density <= 1.0)) throw ConfigError("layer density must lie in (0, 1]");
    if (layer.row_begin >= layer.row_end || layer.row_end > height) {
      throw ConfigError("layer rows must satisfy begin < end <= height");
    }
  }
}

SceneConfig default_scene() {
  SceneConfig s;
  s.layers = {
      {32, 120, 0.5},    {120, 160, 0.02}, {160, 240, 0.2},  {240, 270, 0.0005},
      {270, 350, 0.05},  {350, 400, 0.5},  {400, 470, 0.1},
  };
  return s;
}

SceneConfig parse_scene(std::string_view text) {
  SceneConfig s;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("scene line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key == "height") {
      s.height = to_size(key, value, line_no);
    } else if (key == "width") {
      s.width = to_size(key, value, line_no);
    } else if (key == "axial_pitch") {
      s.axial_pitch = to_double(key, value, line_no);
    } else if (key == "lateral_pitch") {
      s.lateral_pitch = to_double(key, value, line_no);
    } else if (key == "lambda_c") {
      s.lambda_c = to_double(key, value, line_no);
    } else if (key == "delta_lambda") {
      s.delta_lambda = to_double(key, value, line_no);
    } else if (key == "psf_axial_fwhm") {
      if (value == "auto") {
        s.psf_axial_fwhm.reset();
      } else {
        s.psf_axial_fwhm = to_double(key, value, line_no);
      }
    } else if (key == "psf_lateral_fwhm") {
      s.psf_lateral_fwhm = to_double(key, value, line_no);
    } else if (key == "db_floor") {
      s.db_floor = to_double(key, value, line_no);
    } else if (key == "db_ceil") {
      s.db_ceil = to_double(key, value, line_no);
    } else if (key == "layer") {
      std::istringstream fields(value);
      std::string b, e, d, extra;
      if (!(fields >> b >> e >> d) || (fields >> extra)) {
        throw ConfigError("scene line " + std::to_string(line_no) + ": layer needs 'row_begin row_end density'");
      }
      s.layers.push_back({to_size(key, b, line_no), to_size(key, e, line_no), to_double(key, d, line_no)});
    } else {
      throw ConfigError("scene line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  s.validate();
  return s;
}

SceneConfig load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scene file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scene(buf.str());
}

std::string format_scene(const SceneConfig& s) {
  std::ostringstream out;
  out.precision(17);
  out << "height = " << s.height << "\nwidth = " << s.width << "\naxial_pitch = " << s.axial_pitch
      << "\nlateral_pitch = " << s.lateral_pitch << "\nlambda_c = " << s.lambda_c
      << "\ndelta_lambda = " << s.delta_lambda << "\npsf_axial_fwhm = ";
  if (s.psf_axial_fwhm) {
    out << *s.psf_axial_fwhm;
  } else {
    out << "auto";
  }
  out << "\npsf_lateral_fwhm = " << s.psf_lateral_fwhm << "\ndb_floor = " << s.db_floor
      << "\ndb_ceil = " << s.db_ceil << '\n';
  for (const auto& l : s.layers) out << "layer = " << l.row_begin << ' ' << l.row_end << ' ' << l.density << '\n';
  return out.str();
}

std::vector<double> psf_axial_profile(const SceneConfig& s) {
  return gaussian_profile(amplitude_sigma_px(s.axial_fwhm(), s.axial_pitch));
}

std::vector<double> psf_lateral_profile(const SceneConfig& s) {
  return gaussian_profile(amplitude_sigma_px(s.psf_lateral_fwhm, s.lateral_pitch));
}

TomogramIntensities simulate_intensities(const SceneConfig& scene, std::uint64_t seed) {
  scene.validate();
  Image re(scene.height, scene.width, 1.0);
  Image im(scene.height, scene.width, 1.0);
  Image power(scene.height, scene.width, 1.0);

  std::vector<double> density(scene.height, 0.0);
  for (const auto& layer : scene.layers) {
    std::fill(density.begin() + static_cast<std::ptrdiff_t>(layer.row_begin),
              density.begin() + static_cast<std::ptrdiff_t>(layer.row_end), layer.density);
  }

  std::size_t occupied = 0;
  const double amplitude_scale = std::sqrt(0.5);  // unit-variance circular complex Gaussian
  for (std::size_t r = 0; r < scene.height; ++r) {
    if (density[r] <= 0.0) continue;
    for (std::size_t c = 0; c < scene.width; ++c) {
      RandomStream rng(seed, StreamTag::Scatterers, static_cast<std::uint32_t>(r * scene.width + c));
      if (rng.uniform() >= density[r]) continue;
      const auto [a, b] = rng.normal_pair();
      re(r, c) = amplitude_scale * a;
      im(r, c) = amplitude_scale * b;
      power(r, c) = re(r, c) * re(r, c) + im(r, c) * im(r, c);
      ++occupied;
    }
  }
  if (occupied == 0) throw DomainError("scene contains no scatterers");

  const std::vector<double> axial = psf_axial_profile(scene);
  const std::vector<double> lateral = psf_lateral_profile(scene);
  std::vector<double> axial_sq(axial.size());
  std::vector<double> lateral_sq(lateral.size());
  std::transform(axial.begin(), axial.end(), axial_sq.begin(), [](double v) { return v * v; });
  std::transform(lateral.begin(), lateral.end(), lateral_sq.begin(), [](double v) { return v * v; });

  auto blur = [](const Image& img, const std::vector<double>& ax, const std::vector<double>& lat) {
    return convolve_cols(convolve_rows(img, lat, PaddingMode::Zero), ax, PaddingMode::Zero);
  };
  const Image field_re = blur(re, axial, lateral);
  const Image field_im = blur(im, axial, lateral);

  TomogramIntensities out{Image(scene.height, scene.width, 1.0), blur(power, axial_sq, lateral_sq)};
  auto sp = out.speckled.pixels();
  for (std::size_t i = 0; i < sp.size(); ++i) {
    sp[i] = field_re.pixels()[i] * field_re.pixels()[i] + field_im.pixels()[i] * field_im.pixels()[i];
  }
  return out;
}

Image to_display_db(const Image& intensity, double reference_db, double db_floor, double db_ceil) {
  Image out(intensity.height(), intensity.width(), 1.0);
  const double span = db_ceil - db_floor;
  for (std::size_t i = 0; i < intensity.size(); ++i) {
    const double db = 10.0 * std::log10(intensity.pixels()[i] + kDbEpsilon) - reference_db;
    out.pixels()[i] = std::clamp((db - db_floor) / span, 0.0, 1.0);
  }
  return out;
}

Tomogram synth_tomogram(const SceneConfig& scene, std::uint64_t seed) {
  const TomogramIntensities lin = simulate_intensities(scene, seed);
  std::vector<double> sorted(lin.speckled.pixels().begin(), lin.speckled.pixels().end());
  const auto rank = static_cast<std::size_t>(kReferencePercentile * static_cast<double>(sorted.size() - 1));
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank), sorted.end());
  double reference = sorted[rank];
  if (!(reference > 0.0)) reference = *std::max_element(sorted.begin(), sorted.end());
  const double reference_db = 10.0 * std::log10(reference + kDbEpsilon);
  return {to_display_db(lin.speckled, reference_db, scene.db_floor, scene.db_ceil),
          to_display_db(lin.incoherent, reference_db, scene.db_floor, scene.db_ceil)};
}

}  // namespace btb
