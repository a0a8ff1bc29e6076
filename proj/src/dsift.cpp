#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "bandvote/descriptors.hpp"

namespace bandvote {

std::pair<int, int> dsift_grid(int height, int width, const SiftConfig& config) {
  const int patch = config.patch_size();
  if (height < patch || width < patch) return {0, 0};
  return {(height - patch) / config.step + 1, (width - patch) / config.step + 1};
}

DescriptorSet extract_dsift(const Image& image, const SiftConfig& config) {
  if (config.bin_size < 1 || config.step < 1) {
    throw std::invalid_argument("dsift: bin_size and step must be >= 1");
  }
  const int patch = config.patch_size();
  const auto [rows, cols] = dsift_grid(image.height, image.width, config);
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("dsift: image smaller than one patch");
  }

  Image gx, gy;
  image_gradients(image, gx, gy);

  constexpr int kSpatial = SiftConfig::spatial_bins;
  constexpr int kOrient = SiftConfig::orientation_bins;
  constexpr int kDim = SiftConfig::dimension();
  const double orient_width = 2.0 * std::numbers::pi / kOrient;
  const double center = (patch - 1) / 2.0;
  const double sigma = patch / 2.0;
  const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);

  DescriptorSet out;
  out.kind = DescriptorKind::Dsift;
  out.dim = kDim;
  out.count = rows * cols;
  out.grid_rows = rows;
  out.grid_cols = cols;
  out.values.resize(static_cast<std::size_t>(out.count) * kDim);

  std::vector<double> desc(kDim);
  for (int gy_i = 0; gy_i < rows; ++gy_i) {
    for (int gx_j = 0; gx_j < cols; ++gx_j) {
      const int ty = gy_i * config.step;
      const int tx = gx_j * config.step;
      std::fill(desc.begin(), desc.end(), 0.0);

      for (int py = 0; py < patch; ++py) {
        // Spatial bin centers sit at (i + 0.5) * bin_size - 0.5 within the patch.
        const double sy = (py + 0.5) / config.bin_size - 0.5;
        const int iy = static_cast<int>(std::floor(sy));
        const double fy = sy - iy;
        const double wy0 = 1.0 - fy;
        for (int px = 0; px < patch; ++px) {
          const double dx = gx.at(ty + py, tx + px);
          const double dy = gy.at(ty + py, tx + px);
          const double mag = std::sqrt(dx * dx + dy * dy);
          if (mag == 0.0) continue;
          double theta = std::atan2(dy, dx);
          if (theta < 0) theta += 2.0 * std::numbers::pi;

          const double du = px - center;
          const double dv = py - center;
          const double gauss = std::exp(-(du * du + dv * dv) * inv_two_sigma2);
          const double w = mag * gauss;

          const double sx = (px + 0.5) / config.bin_size - 0.5;
          const int ix = static_cast<int>(std::floor(sx));
          const double fx = sx - ix;

          // Orientation bin boundaries at multiples of the bin width; a
          // gradient exactly on a boundary splits evenly.
          const double so = theta / orient_width - 0.5;
          int io = static_cast<int>(std::floor(so));
          const double fo = so - io;
          io = ((io % kOrient) + kOrient) % kOrient;
          const int io1 = (io + 1) % kOrient;

          for (int sy_bin = 0; sy_bin < 2; ++sy_bin) {
            const int by = iy + sy_bin;
            if (by < 0 || by >= kSpatial) continue;
            const double wyv = sy_bin ? fy : wy0;
            for (int sx_bin = 0; sx_bin < 2; ++sx_bin) {
              const int bx = ix + sx_bin;
              if (bx < 0 || bx >= kSpatial) continue;
              const double wxv = sx_bin ? fx : 1.0 - fx;
              double* cellp = desc.data() + (static_cast<std::size_t>(by) * kSpatial + bx) * kOrient;
              cellp[io] += w * wyv * wxv * (1.0 - fo);
              cellp[io1] += w * wyv * wxv * fo;
            }
          }
        }
      }

      double norm = 0;
      for (double v : desc) norm += v * v;
      norm = std::sqrt(norm);
      float* dst = out.row(gy_i * cols + gx_j);
      if (norm < config.norm_threshold) {
        std::fill(dst, dst + kDim, 0.0f);
        continue;
      }
      for (double& v : desc) v = std::min(v / norm, config.clip);
      double norm2 = 0;
      for (double v : desc) norm2 += v * v;
      norm2 = std::sqrt(norm2);
      for (int i = 0; i < kDim; ++i) {
        dst[i] = static_cast<float>(norm2 > 0 ? desc[i] / norm2 : 0.0);
      }
    }
  }
  return out;
}

}  // namespace bandvote
