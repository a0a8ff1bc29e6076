#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bandvote/image.hpp"

namespace bandvote {

// Hyperspectral cube: H x W x B radiance/reflectance values with one
// wavelength per band. Data is stored band-sequential (all of band 0, then
// band 1, ...), each band a row-major H x W plane of float32.
//
// Invariants (checked by validate()):
//   - wavelengths_nm has exactly `bands` entries and is strictly increasing
//   - data has height*width*bands entries, all finite and >= 0
struct HyperspectralCube {
  int height = 0;
  int width = 0;
  int bands = 0;
  std::vector<double> wavelengths_nm;
  std::vector<float> data;

  float& at(int band, int y, int x) {
    return data[(static_cast<std::size_t>(band) * height + y) * width + x];
  }
  float at(int band, int y, int x) const {
    return data[(static_cast<std::size_t>(band) * height + y) * width + x];
  }

  std::size_t plane_size() const { return static_cast<std::size_t>(height) * width; }

  // Copy of one band as an Image.
  Image band(int b) const;
  void set_band(int b, const Image& img);

  // Throws std::runtime_error on any invariant violation.
  void validate() const;
};

// On-disk format: a text header at `path` plus a raw payload at `path` +
// ".raw". The header is key:value lines:
//
//   height: <H>
//   width: <W>
//   bands: <B>
//   wavelengths: <comma-separated nm values>
//   dtype: float32le
//   interleave: bsq
//
// The payload is H*W*B little-endian float32 values in band-sequential
// order. load_cube(write_cube(c)) is a bitwise identity.
HyperspectralCube load_cube(const std::filesystem::path& path);
void write_cube(const HyperspectralCube& cube, const std::filesystem::path& path);

std::filesystem::path cube_payload_path(const std::filesystem::path& header_path);

// Little-endian float32 helpers shared by the cube/feature/model writers.
void write_f32_le(std::vector<float> const& values, const std::filesystem::path& path);
std::vector<float> read_f32_le(const std::filesystem::path& path);

struct SampleEntry {
  std::string subject;
  std::string cube_path;  // relative paths resolve against the manifest directory
  int session = 0;
};

struct BandExclusion {
  int drop_first = 0;
  int drop_last = 0;
};

// Dataset manifest: which cubes exist, who they belong to, and which bands
// the dataset recommends dropping. Every subject needs at least 3 samples so
// a 1-gallery / 2-probe split is always possible.
struct DatasetManifest {
  std::vector<std::string> subjects;
  std::vector<SampleEntry> samples;
  BandExclusion band_exclusion;
  std::filesystem::path base_dir;  // set on load; not serialized

  void validate() const;
  std::filesystem::path resolve(const SampleEntry& sample) const;
  std::vector<int> samples_of(const std::string& subject) const;
};

DatasetManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

}  // namespace bandvote
