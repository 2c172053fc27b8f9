#pragma once

#include <utility>
#include <vector>

#include "binofeat/geometry.hpp"
#include "binofeat/image.hpp"

namespace binofeat {

struct Keypoint {
  PixelCoord pixel;
  float confidence = 0.f;
  float angle = 0.f;  // orientation unused by this detector, kept for consumers
  int octave = 0;
};

struct DetectionConfig {
  float threshold = 0.3f;   // minimum confidence, inclusive
  int nms_grid = 8;         // cell size for grid non-max suppression
  int max_keypoints = 1000;
};

// Grid NMS over a confidence map: cells of nms_grid pixels anchored at (0,0)
// (edge cells may be partial), at most the per-cell maximum survives, and
// only when its confidence passes the threshold. Within-cell ties keep the
// first pixel in row-major order. Survivors are sorted by confidence
// descending (ties: row, then column ascending) and truncated to
// max_keypoints.
std::vector<Keypoint> extract_keypoints(const ImageF32& confidence,
                                        const DetectionConfig& cfg);

struct TargetConfig {
  double response_floor = 1e-4;  // minimum corner response for a target cell
  double occlusion_tol = 0.05;   // relative depth tolerance in frame B
};

// Supervision for one frame pair: binary masks of target pixels for both
// frames, plus the surviving (x_i, x_i+) correspondences with the warped
// coordinate kept at full precision for descriptor sampling.
struct DetectionTarget {
  ImageF32 mask_a;
  ImageF32 mask_b;
  std::vector<std::pair<PixelCoord, PixelCoord>> anchors;
};

// Picks the strongest Shi-Tomasi response in every 16x16 cell of frame A
// (skipping cells whose best response is under response_floor) and marks it
// in mask_a. Each such pixel with valid depth is warped into frame B with
// the relative pose; warps that stay in bounds and pass the occlusion test
// mark their rounded landing pixel in mask_b and contribute an anchor pair.
// Warp failures keep their mask_a positive but supervise nothing in B.
DetectionTarget make_targets(const ImageF32& gray_a, const ImageF32& depth_a,
                             const ImageF32& depth_b, const CameraIntrinsics& k,
                             const Se3Pose& t_ba, const TargetConfig& cfg = {});

}  // namespace binofeat
