#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "btb/image.hpp"

namespace btb {

struct SceneLayer {
  std::size_t row_begin = 0;  // inclusive
  std::size_t row_end = 0;    // exclusive
  double density = 0.0;       // occupancy probability per pixel, (0, 1]
};

/// Layered scatterer phantom imaged through a separable Gaussian PSF. Lengths
/// in microns, wavelengths in nanometers.
struct SceneConfig {
  std::size_t height = 512;
  std::size_t width = 512;
  double axial_pitch = 1.0;
  double lateral_pitch = 5.0;
  double lambda_c = 1300.0;
  double delta_lambda = 130.0;
  std::vector<SceneLayer> layers;
  /// Unset means the coherence-length formula 2 ln2 / pi * lambda_c^2 / delta_lambda.
  std::optional<double> psf_axial_fwhm;
  double psf_lateral_fwhm = 15.0;
  double db_floor = -40.0;
  double db_ceil = 0.0;

  double axial_fwhm() const;
  void validate() const;
};

/// 512x512 layered phantom with densities spanning [0.0005, 0.5].
SceneConfig default_scene();

/// Flat `key = value` text, one pair per line, `#` comments. `layer` may
/// repeat and takes "row_begin row_end density".
SceneConfig parse_scene(std::string_view text);
SceneConfig load_scene(const std::filesystem::path& path);
std::string format_scene(const SceneConfig& scene);

/// Linear-intensity images before the log mapping.
struct TomogramIntensities {
  Image speckled;    // |f * a|^2
  Image incoherent;  // |f|^2 * |a|^2
};

struct Tomogram {
  Image speckled;  // Y, normalized dB in [0, 1]
  Image clean;     // X, same mapping
};

TomogramIntensities simulate_intensities(const SceneConfig& scene, std::uint64_t seed);

/// Maps intensities to [0, 1]: 10 log10(I + 1e-12) relative to `reference_db`,
/// windowed to [db_floor, db_ceil] and clamped.
Image to_display_db(const Image& intensity, double reference_db, double db_floor, double db_ceil);

Tomogram synth_tomogram(const SceneConfig& scene, std::uint64_t seed);

/// Axial and lateral PSF amplitude profiles (peak 1) in pixel units. The
/// configured FWHMs are those of the intensity PSF.
std::vector<double> psf_axial_profile(const SceneConfig& scene);
std::vector<double> psf_lateral_profile(const SceneConfig& scene);

}  // namespace btb
