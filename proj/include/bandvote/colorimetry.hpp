#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "bandvote/cube.hpp"

namespace bandvote {

// Spectral curves on one shared wavelength grid: the XYZ color matching
// functions, the illuminant power distribution, and the camera sensor
// sensitivity. Curves loaded from CSV are linearly resampled onto a 1 nm
// grid covering the intersection of their ranges.
struct SpectralResponse {
  std::vector<double> wavelengths;
  std::vector<double> xbar, ybar, zbar;
  std::vector<double> illuminant;
  std::vector<double> sensor;

  // Bundled tables: multi-Gaussian XYZ matching function fits, the D65
  // daylight illuminant, and a generic silicon photodiode responsivity,
  // resampled to 1 nm over 360-1100 nm.
  static SpectralResponse standard();

  // Five two-column CSVs (wavelength_nm, value): cmf_x, cmf_y, cmf_z,
  // illuminant, sensor.
  static SpectralResponse from_csv_files(const std::filesystem::path& cmf_x,
                                         const std::filesystem::path& cmf_y,
                                         const std::filesystem::path& cmf_z,
                                         const std::filesystem::path& illuminant,
                                         const std::filesystem::path& sensor);
  // The same five curves from one directory with the bundled file names.
  static SpectralResponse from_csv_dir(const std::filesystem::path& dir);

  // Linear interpolation on the grid; zero outside its coverage.
  double sample(const std::vector<double>& curve, double wavelength) const;

  void validate() const;
  void dump_csv_dir(const std::filesystem::path& dir) const;
};

// Linear XYZ -> sRGB matrix (D65 reference white).
inline constexpr std::array<double, 9> kXyzToLinearSrgb = {
    3.2404542,  -1.5371385, -0.4985314,  //
    -0.9692660, 1.8760108,  0.0415560,   //
    0.0556434,  -0.2040259, 1.0572252,
};

struct LinearRgbImage {
  int height = 0;
  int width = 0;
  std::vector<double> r, g, b;  // row-major planes, pre-clamp
  bool clipped_wavelengths = false;
};

// Per pixel: XYZ = sum_b value * illuminant * sensor * CMF * trapezoid
// weight over the cube's wavelengths, normalized so a flat unit-reflectance
// spectrum lands on the illuminant white point with Y = 1, then mapped by
// the sRGB matrix. No clamping; exactly linear in the input.
LinearRgbImage hsi_to_linear_rgb(const HyperspectralCube& cube, const SpectralResponse& response);

// XYZ planes under the same normalization, for colorimetric checks.
LinearRgbImage hsi_to_xyz(const HyperspectralCube& cube, const SpectralResponse& response);

// 3-band cube ordered blue, green, red (nominal wavelengths 450/550/600 nm).
// Negative channel values clamp to 0; if any value exceeds 1 the image is
// scaled by its maximum so the output lies in [0, 1].
HyperspectralCube hsi_to_rgb(const HyperspectralCube& cube, const SpectralResponse& response);

// Apply the sRGB transfer curve in place; export convenience only, the
// classification pipeline always runs on linear values.
void apply_srgb_gamma(HyperspectralCube& rgb);

}  // namespace bandvote
