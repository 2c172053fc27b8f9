#include "binofeat/shi_tomasi.hpp"

#include <cmath>
#include <vector>

#include "binofeat/errors.hpp"

namespace binofeat {

ImageF32 shi_tomasi_response(const ImageF32& gray) {
  const int w = gray.width(), h = gray.height();
  if (w < 5 || h < 5) throw ShapeError("shi_tomasi: image smaller than 5x5");

  std::vector<float> gx(static_cast<std::size_t>(w) * h, 0.f);
  std::vector<float> gy(static_cast<std::size_t>(w) * h, 0.f);
  for (int y = 1; y < h - 1; ++y)
    for (int x = 1; x < w - 1; ++x) {
      gx[static_cast<std::size_t>(y) * w + x] =
          0.5f * (gray.at(x + 1, y) - gray.at(x - 1, y));
      gy[static_cast<std::size_t>(y) * w + x] =
          0.5f * (gray.at(x, y + 1) - gray.at(x, y - 1));
    }

  ImageF32 out(w, h, 0.f);
  for (int y = 2; y < h - 2; ++y)
    for (int x = 2; x < w - 2; ++x) {
      double sxx = 0, sxy = 0, syy = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const std::size_t i = static_cast<std::size_t>(y + dy) * w + (x + dx);
          sxx += static_cast<double>(gx[i]) * gx[i];
          sxy += static_cast<double>(gx[i]) * gy[i];
          syy += static_cast<double>(gy[i]) * gy[i];
        }
      const double half_trace = 0.5 * (sxx + syy);
      const double half_diff = 0.5 * (sxx - syy);
      const double lambda_min =
          half_trace - std::sqrt(half_diff * half_diff + sxy * sxy);
      out.at(x, y) = static_cast<float>(std::max(lambda_min, 0.0));
    }
  return out;
}

}  // namespace binofeat
