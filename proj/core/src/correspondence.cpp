#include "binofeat/correspondence.hpp"

#include <cmath>
#include <set>

#include "binofeat/errors.hpp"

namespace binofeat {

Se3Pose relative_pose_from_gt(const Se3Pose& world_from_a, const Se3Pose& world_from_b) {
  return world_from_b.inverse().compose(world_from_a);
}

double depth_at(const ImageF32& depth, const PixelCoord& p) {
  const int x = static_cast<int>(std::lround(p.u));
  const int y = static_cast<int>(std::lround(p.v));
  if (!depth.in_bounds(x, y)) return 0.0;
  return depth.at(x, y);
}

CorrespondenceSet make_correspondences(const Frame& a, const Frame& b,
                                       const std::vector<PixelCoord>& samples,
                                       const CameraIntrinsics& k,
                                       const CorrespondenceConfig& cfg,
                                       int frame_a_id, int frame_b_id) {
  if (!a.gt_pose || !b.gt_pose)
    throw UnsupervisedPairError("make_correspondences: frame without ground-truth pose");

  CorrespondenceSet set;
  set.frame_a = frame_a_id;
  set.frame_b = frame_b_id;
  set.relative_pose = relative_pose_from_gt(*a.gt_pose, *b.gt_pose);

  std::set<std::pair<double, double>> seen;
  for (const auto& sample : samples) {
    if (!seen.insert({sample.u, sample.v}).second) continue;  // unique in x_i
    const double z = depth_at(a.depth, sample);
    const auto warped = warp_correspondence(sample, z, set.relative_pose, k);
    if (!warped) continue;
    const double u = warped->pixel.u, v = warped->pixel.v;
    if (u < cfg.border || u > k.width - 1 - cfg.border || v < cfg.border ||
        v > k.height - 1 - cfg.border)
      continue;
    const double zb = depth_at(b.depth, warped->pixel);
    if (zb > 0 && std::abs(warped->depth - zb) > cfg.occlusion_tol * warped->depth)
      continue;
    set.pairs.emplace_back(sample, warped->pixel);
  }
  return set;
}

}  // namespace binofeat
