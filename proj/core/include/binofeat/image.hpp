#pragma once

#include <cstdint>
#include <vector>

namespace binofeat {

// Dense single-channel float image, row-major. Grayscale images store
// intensities in [0,1]; depth images store meters with 0 = missing.
class ImageF32 {
 public:
  ImageF32() = default;
  ImageF32(int width, int height, float fill = 0.f)
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return data_.empty(); }

  float& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  float at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }

  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }

  const std::vector<float>& data() const { return data_; }
  std::vector<float>& data() { return data_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

// Bilinear interpolation at continuous coordinates; (x,y) = integer position
// is the sample at that pixel. Caller guarantees 0 <= x <= w-1, 0 <= y <= h-1.
float sample_bilinear(const ImageF32& img, double x, double y);

// Mean over an axis-aligned box, clipped to the image.
float box_mean(const ImageF32& img, int cx, int cy, int radius);

// 2x area downsampling (mean of 2x2 blocks); image dimensions must be even.
ImageF32 downsample2(const ImageF32& img);

}  // namespace binofeat
