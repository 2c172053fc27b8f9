#pragma once

#include <utility>
#include <vector>

#include "binofeat/geometry.hpp"
#include "binofeat/tum_dataset.hpp"

namespace binofeat {

// Ground-truth pixel correspondences between two frames, produced by
// back-projecting with depth and re-projecting through the relative pose.
struct CorrespondenceSet {
  int frame_a = 0;
  int frame_b = 0;
  // (x in frame A, matching x in frame B); unique in the first coordinate.
  std::vector<std::pair<PixelCoord, PixelCoord>> pairs;
  Se3Pose relative_pose;  // frame-A camera coords -> frame-B camera coords
};

struct CorrespondenceConfig {
  double occlusion_tol = 0.05;  // relative depth tolerance against frame B
  double border = 0.0;          // extra in-bounds margin in frame B, pixels
};

// Warps each sample from frame A into frame B using the ground-truth poses.
// A sample survives if it has valid depth in A, lands in-bounds in B, and is
// not occluded (|warped_z - depth_b| <= occlusion_tol * warped_z wherever
// frame B has valid depth). Depth is looked up at the nearest pixel.
// Throws UnsupervisedPairError when either frame lacks a ground-truth pose.
CorrespondenceSet make_correspondences(const Frame& a, const Frame& b,
                                       const std::vector<PixelCoord>& samples,
                                       const CameraIntrinsics& k,
                                       const CorrespondenceConfig& cfg = {},
                                       int frame_a_id = 0, int frame_b_id = 1);

// Relative pose B<-A from two camera-to-world poses.
Se3Pose relative_pose_from_gt(const Se3Pose& world_from_a, const Se3Pose& world_from_b);

// Depth at the nearest pixel, 0 outside the image.
double depth_at(const ImageF32& depth, const PixelCoord& p);

}  // namespace binofeat
