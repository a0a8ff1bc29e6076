#pragma once

#include <cstdint>
#include <filesystem>

#include "bandvote/cube.hpp"

namespace bandvote {

// Parameters for the synthetic face-like dataset generator. Subjects differ
// by a smooth spectral signature (Gaussian bumps over wavelength, scaled by
// spectral_contrast) and by a blob layout (scaled by spatial_contrast);
// samples of one subject differ only by i.i.d. Gaussian pixel noise.
struct SyntheticSpec {
  int n_subjects = 10;
  int samples_per_subject = 3;
  int height = 64;
  int width = 64;
  int bands = 16;
  double spectral_contrast = 0.8;
  double spatial_contrast = 0.8;
  double noise_sigma = 0.02;
  std::uint64_t seed = 0;

  void validate() const;
};

// Writes one cube per (subject, sample) plus manifest.json into out_dir and
// returns the manifest. Deterministic: the same spec produces byte-identical
// files. Wavelengths are 400 + 10*b nm. Values are clamped to [0, 1].
DatasetManifest generate_synthetic(const SyntheticSpec& spec,
                                   const std::filesystem::path& out_dir);

}  // namespace bandvote
