#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bandvote/image.hpp"

namespace bandvote {

enum class DescriptorKind { Hog, Lbp, Dsift, FisherVec };

std::string descriptor_kind_name(DescriptorKind kind);
DescriptorKind descriptor_kind_from_name(const std::string& name);

// Histogram-of-oriented-gradients parameters. Orientation bin centers sit at
// i * (range / bins), so a perfectly horizontal gradient votes entirely into
// bin 0.
struct HogConfig {
  int cell = 8;          // pixels per cell side
  int bins = 9;          // orientation bins
  int block = 2;         // cells per block side
  int block_stride = 1;  // cells between block origins
  bool unsigned_orientations = true;  // fold angles into [0, 180)
  double epsilon = 1e-6;              // guards the block norms
};

struct LbpConfig {
  double radius = 1.0;
  int neighbors = 8;  // the uniform coding table is for 8-bit patterns
  int cell = 8;       // pixels per histogram cell side
  bool uniform = true;
};

// Dense SIFT: upright descriptors on a fixed grid, no scale or orientation
// selection. Orientation bin boundaries sit at multiples of 45 degrees; each
// descriptor covers a (4 * bin_size)^2 patch.
struct SiftConfig {
  int bin_size = 4;
  int step = 8;
  static constexpr int spatial_bins = 4;
  static constexpr int orientation_bins = 8;
  double norm_threshold = 1e-5;  // descriptors below this raw norm become zero
  double clip = 0.2;

  int patch_size() const { return spatial_bins * bin_size; }
  static constexpr int dimension() { return spatial_bins * spatial_bins * orientation_bins; }
};

// Uniform-dimension descriptor rows extracted from one band image. HOG and
// LBP produce exactly one concatenated vector; dense SIFT produces one row
// per grid site, row-major over the site grid.
struct DescriptorSet {
  DescriptorKind kind = DescriptorKind::Hog;
  int band_index = 0;
  int dim = 0;
  int count = 0;
  int grid_rows = 0;
  int grid_cols = 0;
  std::vector<float> values;  // count x dim, row-major

  const float* row(int i) const { return values.data() + static_cast<std::size_t>(i) * dim; }
  float* row(int i) { return values.data() + static_cast<std::size_t>(i) * dim; }
};

DescriptorSet extract_hog(const Image& image, const HogConfig& config);
DescriptorSet extract_lbp(const Image& image, const LbpConfig& config);
DescriptorSet extract_dsift(const Image& image, const SiftConfig& config);

// Layout arithmetic, exposed so callers can size buffers up front.
int hog_cells_per_axis(int dim_pixels, const HogConfig& config);
int hog_blocks_per_axis(int dim_pixels, const HogConfig& config);
std::size_t hog_feature_length(int height, int width, const HogConfig& config);
std::size_t lbp_feature_length(int height, int width, const LbpConfig& config);
std::pair<int, int> dsift_grid(int height, int width, const SiftConfig& config);

// Uniform LBP code table: patterns with at most two circular 0/1 transitions
// keep distinct labels (58 of them, in increasing pattern order); all other
// patterns share label 58.
int lbp_uniform_label(int pattern);
inline constexpr int kLbpUniformBins = 59;

// Feature file: text header at `path` (kind, bands, vectors per band, dim,
// grid) plus float32le payload at `path` + ".raw", band-major.
struct FeatureFile {
  DescriptorKind kind = DescriptorKind::Hog;
  std::vector<DescriptorSet> per_band;
};

void save_features(const FeatureFile& features, const std::filesystem::path& path);
FeatureFile load_features(const std::filesystem::path& path);

}  // namespace bandvote
