#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace bandvote {

// Single-band grayscale image, row-major float32.
struct Image {
  int height = 0;
  int width = 0;
  std::vector<float> data;

  Image() = default;
  Image(int h, int w, float fill = 0.0f)
      : height(h), width(w), data(static_cast<std::size_t>(h) * w, fill) {
    if (h <= 0 || w <= 0) throw std::invalid_argument("Image: dimensions must be positive");
  }

  float& at(int y, int x) { return data[static_cast<std::size_t>(y) * width + x]; }
  float at(int y, int x) const { return data[static_cast<std::size_t>(y) * width + x]; }

  // Edge-replicating access; out-of-range indices clamp to the border.
  float at_clamped(int y, int x) const {
    y = std::clamp(y, 0, height - 1);
    x = std::clamp(x, 0, width - 1);
    return at(y, x);
  }

  std::size_t size() const { return data.size(); }
};

// Bilinear sample with edge replication. (sx, sy) in pixel coordinates.
inline float sample_bilinear(const Image& img, double sy, double sx) {
  const int y0 = static_cast<int>(std::floor(sy));
  const int x0 = static_cast<int>(std::floor(sx));
  const double fy = sy - y0;
  const double fx = sx - x0;
  const double v00 = img.at_clamped(y0, x0);
  const double v01 = img.at_clamped(y0, x0 + 1);
  const double v10 = img.at_clamped(y0 + 1, x0);
  const double v11 = img.at_clamped(y0 + 1, x0 + 1);
  const double top = v00 + fx * (v01 - v00);
  const double bot = v10 + fx * (v11 - v10);
  return static_cast<float>(top + fy * (bot - top));
}

// Central-difference gradient maps with edge replication.
void image_gradients(const Image& img, Image& gx, Image& gy);

}  // namespace bandvote
