#include "bandvote/image.hpp"

namespace bandvote {

void image_gradients(const Image& img, Image& gx, Image& gy) {
  gx = Image(img.height, img.width);
  gy = Image(img.height, img.width);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      gx.at(y, x) = 0.5f * (img.at_clamped(y, x + 1) - img.at_clamped(y, x - 1));
      gy.at(y, x) = 0.5f * (img.at_clamped(y + 1, x) - img.at_clamped(y - 1, x));
    }
  }
}

}  // namespace bandvote
