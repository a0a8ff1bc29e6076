#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bandvote/descriptors.hpp"

namespace bandvote {

namespace {

// Offsets snapped to the pixel grid when within 1e-9, so the four
// axis-aligned neighbors of a radius-1 ring are read exactly.
std::array<std::pair<double, double>, 8> neighbor_offsets(double radius) {
  std::array<std::pair<double, double>, 8> offsets;
  for (int k = 0; k < 8; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / 8.0;
    double dx = radius * std::cos(angle);
    double dy = radius * std::sin(angle);
    if (std::abs(dx - std::round(dx)) < 1e-9) dx = std::round(dx);
    if (std::abs(dy - std::round(dy)) < 1e-9) dy = std::round(dy);
    offsets[k] = {dx, dy};
  }
  return offsets;
}

const std::array<int, 256>& uniform_table() {
  static const std::array<int, 256> table = [] {
    std::array<int, 256> t{};
    int next = 0;
    for (int p = 0; p < 256; ++p) {
      const int rotated = ((p << 1) | (p >> 7)) & 0xFF;
      const int transitions = std::popcount(static_cast<unsigned>(p ^ rotated));
      t[p] = (transitions <= 2) ? next++ : -1;
    }
    for (int p = 0; p < 256; ++p) {
      if (t[p] < 0) t[p] = kLbpUniformBins - 1;
    }
    return t;
  }();
  return table;
}

}  // namespace

int lbp_uniform_label(int pattern) { return uniform_table()[pattern & 0xFF]; }

std::size_t lbp_feature_length(int height, int width, const LbpConfig& config) {
  const std::size_t cells_y = height / config.cell;
  const std::size_t cells_x = width / config.cell;
  const std::size_t bins = config.uniform ? kLbpUniformBins : 256;
  return cells_y * cells_x * bins;
}

DescriptorSet extract_lbp(const Image& image, const LbpConfig& config) {
  if (config.neighbors != 8) {
    throw std::invalid_argument("lbp: only 8-neighbor codes are supported");
  }
  if (config.radius <= 0) throw std::invalid_argument("lbp: radius must be positive");
  if (config.cell < 1) throw std::invalid_argument("lbp: cell must be >= 1");
  const int min_side = static_cast<int>(2 * config.radius) + 1;
  if (image.height < min_side || image.width < min_side) {
    throw std::invalid_argument("lbp: image smaller than the sampling ring");
  }
  const int cells_y = image.height / config.cell;
  const int cells_x = image.width / config.cell;
  if (cells_y < 1 || cells_x < 1) {
    throw std::invalid_argument("lbp: image smaller than one cell");
  }

  const auto offsets = neighbor_offsets(config.radius);
  const int bins = config.uniform ? kLbpUniformBins : 256;

  DescriptorSet out;
  out.kind = DescriptorKind::Lbp;
  out.dim = cells_y * cells_x * bins;
  out.count = 1;
  out.grid_rows = cells_y;
  out.grid_cols = cells_x;
  out.values.assign(out.dim, 0.0f);

  // Codes for every covered pixel; ring samples take bilinear values with
  // edge replication, ties (neighbor == center) set the bit.
  for (int y = 0; y < cells_y * config.cell; ++y) {
    const int cy = y / config.cell;
    for (int x = 0; x < cells_x * config.cell; ++x) {
      const int cx = x / config.cell;
      const float center = image.at(y, x);
      int code = 0;
      for (int k = 0; k < 8; ++k) {
        const float sample = sample_bilinear(image, y + offsets[k].second, x + offsets[k].first);
        if (sample >= center) code |= 1 << k;
      }
      const int label = config.uniform ? lbp_uniform_label(code) : code;
      out.values[(static_cast<std::size_t>(cy) * cells_x + cx) * bins + label] += 1.0f;
    }
  }

  // L1-normalize each cell histogram; every cell holds cell*cell codes.
  const float inv = 1.0f / (config.cell * config.cell);
  for (float& v : out.values) v *= inv;
  return out;
}

}  // namespace bandvote
