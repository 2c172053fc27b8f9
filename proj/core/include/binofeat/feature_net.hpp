#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "binofeat/autodiff.hpp"
#include "binofeat/checkpoint.hpp"
#include "binofeat/detection.hpp"
#include "binofeat/geometry.hpp"
#include "binofeat/image.hpp"

namespace binofeat {

inline constexpr int kCellSize = 16;        // descriptor grid stride in pixels
inline constexpr int kDescriptorDim = 256;  // raw feature channels

struct NetConfig {
  bool tiny = false;
  std::uint32_t seed = 0;
};

// One forward pass over a frame. `features` holds the pre-binarization
// descriptor map [256, H/16, W/16]; `prob_map` the full-resolution keypoint
// confidence [1, H, W].
struct DenseOutputs {
  NodePtr features;
  NodePtr prob_map;
  int grid_width = 0;
  int grid_height = 0;
};

// Maps a pixel to descriptor-grid coordinates. Cell (i,j) covers the 16x16
// pixel block with center (16i + 7.5, 16j + 7.5), so the center lands exactly
// on grid point (i, j).
inline GridPoint feature_grid_coord(const PixelCoord& px) {
  return {(px.u - 7.5) / kCellSize, (px.v - 7.5) / kCellSize};
}

// Bilinear 4-tap read of a coarse [256, gh, gw] feature map at a keypoint's
// grid-scaled position; a keypoint exactly on a cell center returns that
// cell's vector. The keypoint must lie inside the gw*16 x gh*16 image
// (throws BoundsError otherwise).
std::vector<float> sample_descriptor(const Tensor& feature_map, const Keypoint& kp);

// Four strided 4x4 conv + relu stages (stride 2, pad 1 each, so 1/16
// resolution after the stack), then two 1x1 heads: a detector head whose 256
// channels are pixel-shuffled back to full resolution and squashed through a
// sigmoid, and a descriptor head left raw for downstream binarization.
class FeatureNet {
 public:
  explicit FeatureNet(const NetConfig& config);

  // Input dimensions must be positive multiples of 16.
  DenseOutputs forward(const ImageF32& gray) const;

  std::vector<NodePtr> parameters() const;
  std::int64_t param_count() const;
  NamedTensors state() const;
  void load_state(const NamedTensors& tensors);
  bool tiny() const { return config_.tiny; }

 private:
  struct ConvParams {
    std::string name;
    NodePtr weight;
    NodePtr bias;
    int stride = 1;
    int padding = 0;
  };

  NetConfig config_;
  std::vector<ConvParams> stages_;
  ConvParams detector_;
  ConvParams descriptor_;
};

}  // namespace binofeat
