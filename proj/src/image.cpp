#include "shforge/image.hpp"

#include <algorithm>
#include <cmath>

#include "shforge/error.hpp"

namespace shforge {

ImageU8 resize_cover(const ImageU8& src, int width, int height) {
  require(!src.empty(), "resize_cover: empty image");
  require(width > 0 && height > 0, "resize_cover: non-positive target size");

  const double scale = std::max(static_cast<double>(width) / src.width(),
                                static_cast<double>(height) / src.height());
  const double src_w = width / scale;
  const double src_h = height / scale;
  const double x0 = (src.width() - src_w) / 2.0;
  const double y0 = (src.height() - src_h) / 2.0;

  ImageU8 out(width, height, src.channels());
  for (int y = 0; y < height; ++y) {
    const int sy = std::clamp(
        static_cast<int>(y0 + (y + 0.5) / scale), 0, src.height() - 1);
    for (int x = 0; x < width; ++x) {
      const int sx = std::clamp(
          static_cast<int>(x0 + (x + 0.5) / scale), 0, src.width() - 1);
      for (int c = 0; c < src.channels(); ++c)
        out.at(x, y, c) = src.at(sx, sy, c);
    }
  }
  return out;
}

}  // namespace shforge
