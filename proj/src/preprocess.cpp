#include "bandvote/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bandvote/parallel.hpp"

namespace bandvote {

HyperspectralCube exclude_bands(const HyperspectralCube& cube, int drop_first, int drop_last) {
  if (drop_first < 0 || drop_last < 0) {
    throw std::invalid_argument("exclude_bands: drop counts must be non-negative");
  }
  if (drop_first + drop_last >= cube.bands) {
    throw std::invalid_argument("exclude_bands: exclusion leaves no bands");
  }
  const int kept = cube.bands - drop_first - drop_last;
  HyperspectralCube out;
  out.height = cube.height;
  out.width = cube.width;
  out.bands = kept;
  out.wavelengths_nm.assign(cube.wavelengths_nm.begin() + drop_first,
                            cube.wavelengths_nm.begin() + drop_first + kept);
  // Band-sequential layout makes the kept range contiguous.
  const std::size_t plane = cube.plane_size();
  out.data.assign(cube.data.begin() + static_cast<std::size_t>(drop_first) * plane,
                  cube.data.begin() + static_cast<std::size_t>(drop_first + kept) * plane);
  return out;
}

Image median_filter_band(const Image& image, int window) {
  if (window < 1 || window % 2 == 0) {
    throw std::invalid_argument("median_filter_band: window must be odd and >= 1");
  }
  if (image.data.empty()) throw std::invalid_argument("median_filter_band: empty image");
  if (window == 1) return image;

  const int r = window / 2;
  Image out(image.height, image.width);
  std::vector<float> values;
  values.reserve(static_cast<std::size_t>(window) * window);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      values.clear();
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          values.push_back(image.at_clamped(y + dy, x + dx));
        }
      }
      auto mid = values.begin() + values.size() / 2;
      std::nth_element(values.begin(), mid, values.end());
      out.at(y, x) = *mid;
    }
  }
  return out;
}

Image resize_band(const Image& image, int target) {
  if (target < 1) throw std::invalid_argument("resize_band: target must be >= 1");
  if (image.height < 2 || image.width < 2) {
    throw std::invalid_argument("resize_band: input must be at least 2x2");
  }
  if (target == image.height && target == image.width) return image;

  Image out(target, target);
  const double sy = target > 1 ? double(image.height - 1) / (target - 1) : 0.0;
  const double sx = target > 1 ? double(image.width - 1) / (target - 1) : 0.0;
  for (int y = 0; y < target; ++y) {
    const double src_y = y * sy;
    const int y0 = std::min(static_cast<int>(src_y), image.height - 2);
    const double fy = src_y - y0;
    for (int x = 0; x < target; ++x) {
      const double src_x = x * sx;
      const int x0 = std::min(static_cast<int>(src_x), image.width - 2);
      const double fx = src_x - x0;
      const double top = image.at(y0, x0) + fx * (image.at(y0, x0 + 1) - image.at(y0, x0));
      const double bot =
          image.at(y0 + 1, x0) + fx * (image.at(y0 + 1, x0 + 1) - image.at(y0 + 1, x0));
      out.at(y, x) = static_cast<float>(top + fy * (bot - top));
    }
  }
  return out;
}

HyperspectralCube preprocess_cube(const HyperspectralCube& cube, const PreprocessConfig& config) {
  if (config.median_window < 1 || config.median_window % 2 == 0) {
    throw std::invalid_argument("preprocess: median window must be odd and >= 1");
  }
  if (config.target_size < config.median_window) {
    throw std::invalid_argument("preprocess: target size must be >= median window");
  }
  HyperspectralCube sliced = exclude_bands(cube, config.drop_first, config.drop_last);

  HyperspectralCube out;
  out.height = config.target_size;
  out.width = config.target_size;
  out.bands = sliced.bands;
  out.wavelengths_nm = sliced.wavelengths_nm;
  out.data.resize(out.plane_size() * out.bands);

  parallel_for(static_cast<std::size_t>(sliced.bands), [&](std::size_t b) {
    Image img = sliced.band(static_cast<int>(b));
    img = median_filter_band(img, config.median_window);
    img = resize_band(img, config.target_size);
    out.set_band(static_cast<int>(b), img);
  });
  return out;
}

}  // namespace bandvote
