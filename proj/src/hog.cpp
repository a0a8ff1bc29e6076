#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "bandvote/descriptors.hpp"

namespace bandvote {

namespace {
constexpr double kHogClip = 0.2;
}

int hog_cells_per_axis(int dim_pixels, const HogConfig& config) {
  return dim_pixels / config.cell;
}

int hog_blocks_per_axis(int dim_pixels, const HogConfig& config) {
  const int cells = hog_cells_per_axis(dim_pixels, config);
  if (cells < config.block) return 0;
  return (cells - config.block) / config.block_stride + 1;
}

std::size_t hog_feature_length(int height, int width, const HogConfig& config) {
  const std::size_t blocks_y = hog_blocks_per_axis(height, config);
  const std::size_t blocks_x = hog_blocks_per_axis(width, config);
  return blocks_y * blocks_x * config.block * config.block * config.bins;
}

DescriptorSet extract_hog(const Image& image, const HogConfig& config) {
  if (config.cell < 2 || config.bins < 2 || config.block < 1 || config.block_stride < 1) {
    throw std::invalid_argument("hog: invalid configuration");
  }
  const int cells_y = hog_cells_per_axis(image.height, config);
  const int cells_x = hog_cells_per_axis(image.width, config);
  const int blocks_y = hog_blocks_per_axis(image.height, config);
  const int blocks_x = hog_blocks_per_axis(image.width, config);
  if (blocks_y < 1 || blocks_x < 1) {
    throw std::invalid_argument("hog: image smaller than one block");
  }

  Image gx, gy;
  image_gradients(image, gx, gy);

  // Per-cell orientation histograms; magnitude votes split linearly between
  // the two nearest bin centers.
  const int bins = config.bins;
  const double range = config.unsigned_orientations ? std::numbers::pi : 2.0 * std::numbers::pi;
  const double bin_width = range / bins;
  std::vector<double> hist(static_cast<std::size_t>(cells_y) * cells_x * bins, 0.0);

  for (int y = 0; y < cells_y * config.cell; ++y) {
    const int cy = y / config.cell;
    for (int x = 0; x < cells_x * config.cell; ++x) {
      const int cx = x / config.cell;
      const double dx = gx.at(y, x);
      const double dy = gy.at(y, x);
      const double mag = std::sqrt(dx * dx + dy * dy);
      if (mag == 0.0) continue;
      double theta = std::atan2(dy, dx);
      if (config.unsigned_orientations) {
        if (theta < 0) theta += std::numbers::pi;
        if (theta >= std::numbers::pi) theta -= std::numbers::pi;
      } else {
        if (theta < 0) theta += 2.0 * std::numbers::pi;
      }
      const double t = theta / bin_width;
      int i0 = static_cast<int>(std::floor(t));
      const double frac = t - i0;
      if (i0 >= bins) i0 -= bins;
      const int i1 = (i0 + 1) % bins;
      double* cell_hist = hist.data() + (static_cast<std::size_t>(cy) * cells_x + cx) * bins;
      cell_hist[i0] += mag * (1.0 - frac);
      cell_hist[i1] += mag * frac;
    }
  }

  // Blocks of block x block cells, L2-hys normalized: normalize, clip at
  // 0.2, renormalize, with epsilon keeping all-zero blocks at zero.
  const int block_dim = config.block * config.block * bins;
  DescriptorSet out;
  out.kind = DescriptorKind::Hog;
  out.dim = blocks_y * blocks_x * block_dim;
  out.count = 1;
  out.grid_rows = blocks_y;
  out.grid_cols = blocks_x;
  out.values.resize(out.dim);

  std::vector<double> block(block_dim);
  const double eps2 = config.epsilon * config.epsilon;
  std::size_t offset = 0;
  for (int by = 0; by < blocks_y; ++by) {
    for (int bx = 0; bx < blocks_x; ++bx) {
      int k = 0;
      for (int cy = by * config.block_stride; cy < by * config.block_stride + config.block; ++cy) {
        for (int cx = bx * config.block_stride; cx < bx * config.block_stride + config.block;
             ++cx) {
          const double* cell_hist =
              hist.data() + (static_cast<std::size_t>(cy) * cells_x + cx) * bins;
          for (int b = 0; b < bins; ++b) block[k++] = cell_hist[b];
        }
      }
      double sumsq = 0;
      for (double v : block) sumsq += v * v;
      double norm = std::sqrt(sumsq + eps2);
      for (double& v : block) v = std::min(v / norm, kHogClip);
      sumsq = 0;
      for (double v : block) sumsq += v * v;
      norm = std::sqrt(sumsq + eps2);
      for (int i = 0; i < block_dim; ++i) {
        out.values[offset + i] = static_cast<float>(block[i] / norm);
      }
      offset += block_dim;
    }
  }
  return out;
}

}  // namespace bandvote
