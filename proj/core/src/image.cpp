#include "binofeat/image.hpp"

#include <algorithm>
#include <cmath>

#include "binofeat/errors.hpp"

namespace binofeat {

float sample_bilinear(const ImageF32& img, double x, double y) {
  const int x0 = std::clamp(static_cast<int>(std::floor(x)), 0, img.width() - 1);
  const int y0 = std::clamp(static_cast<int>(std::floor(y)), 0, img.height() - 1);
  const int x1 = std::min(x0 + 1, img.width() - 1);
  const int y1 = std::min(y0 + 1, img.height() - 1);
  const double fx = std::clamp(x - x0, 0.0, 1.0);
  const double fy = std::clamp(y - y0, 0.0, 1.0);
  const double v00 = img.at(x0, y0), v10 = img.at(x1, y0);
  const double v01 = img.at(x0, y1), v11 = img.at(x1, y1);
  const double top = v00 + (v10 - v00) * fx;
  const double bot = v01 + (v11 - v01) * fx;
  return static_cast<float>(top + (bot - top) * fy);
}

float box_mean(const ImageF32& img, int cx, int cy, int radius) {
  const int x0 = std::max(0, cx - radius);
  const int x1 = std::min(img.width() - 1, cx + radius);
  const int y0 = std::max(0, cy - radius);
  const int y1 = std::min(img.height() - 1, cy + radius);
  double sum = 0.0;
  int n = 0;
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      sum += img.at(x, y);
      ++n;
    }
  return n > 0 ? static_cast<float>(sum / n) : 0.f;
}

ImageF32 downsample2(const ImageF32& img) {
  if (img.width() % 2 != 0 || img.height() % 2 != 0)
    throw ShapeError("downsample2: dimensions must be even, got " +
                     std::to_string(img.width()) + "x" + std::to_string(img.height()));
  ImageF32 out(img.width() / 2, img.height() / 2);
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x) {
      const float s = img.at(2 * x, 2 * y) + img.at(2 * x + 1, 2 * y) +
                      img.at(2 * x, 2 * y + 1) + img.at(2 * x + 1, 2 * y + 1);
      out.at(x, y) = 0.25f * s;
    }
  return out;
}

}  // namespace binofeat
