#pragma once

#include "bandvote/cube.hpp"
#include "bandvote/image.hpp"

namespace bandvote {

// Band exclusion, per-band median filtering, and per-band resize to a fixed
// square resolution, applied in that order.
struct PreprocessConfig {
  int target_size = 263;
  int median_window = 3;  // odd; 1 disables filtering
  int drop_first = 0;
  int drop_last = 0;
};

// Keeps bands [drop_first, bands - drop_last), slicing wavelengths to match.
HyperspectralCube exclude_bands(const HyperspectralCube& cube, int drop_first, int drop_last);

// Median over a window x window neighborhood, borders by edge replication.
// The window area is odd, so the median is always an element of the window.
Image median_filter_band(const Image& image, int window);

// Corner-aligned bilinear resize to target x target. Output values stay
// within [min(input), max(input)].
Image resize_band(const Image& image, int target);

HyperspectralCube preprocess_cube(const HyperspectralCube& cube, const PreprocessConfig& config);

}  // namespace bandvote
