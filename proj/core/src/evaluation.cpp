#include "binofeat/evaluation.hpp"

#include <cmath>

#include "binofeat/correspondence.hpp"
#include "binofeat/errors.hpp"

namespace binofeat {

AteResult ate_rmse(const Trajectory& est, const Trajectory& gt, double max_dt) {
  std::vector<double> ts_est, ts_gt;
  for (const auto& e : est.entries) ts_est.push_back(e.timestamp);
  for (const auto& e : gt.entries) ts_gt.push_back(e.timestamp);
  const auto assoc = associate(ts_est, ts_gt, max_dt);
  if (assoc.size() < 2)
    throw DegenerateConfigError("ate_rmse: only " + std::to_string(assoc.size()) +
                                " associated pose pairs");

  std::vector<Eigen::Vector3d> p_est, p_gt;
  p_est.reserve(assoc.size());
  p_gt.reserve(assoc.size());
  for (const auto& [ie, ig] : assoc) {
    p_est.push_back(est.entries[static_cast<std::size_t>(ie)].pose.translation());
    p_gt.push_back(gt.entries[static_cast<std::size_t>(ig)].pose.translation());
  }

  AteResult result;
  try {
    result.alignment = rigid_align(p_est, p_gt);
  } catch (const DegenerateConfigError&) {
    Eigen::Vector3d c_est = Eigen::Vector3d::Zero(), c_gt = Eigen::Vector3d::Zero();
    for (const auto& p : p_est) c_est += p;
    for (const auto& p : p_gt) c_gt += p;
    const double n = static_cast<double>(p_est.size());
    result.alignment =
        Se3Pose(Eigen::Matrix3d::Identity(), c_gt / n - c_est / n);
  }

  double sq_sum = 0.0;
  for (std::size_t i = 0; i < p_est.size(); ++i) {
    const double err = (result.alignment.apply(p_est[i]) - p_gt[i]).norm();
    result.timestamps.push_back(
        est.entries[static_cast<std::size_t>(assoc[i].first)].timestamp);
    result.errors.push_back(err);
    sq_sum += err * err;
  }
  result.rmse_m = std::sqrt(sq_sum / static_cast<double>(p_est.size()));
  return result;
}

BenchmarkResult matching_benchmark(const std::vector<FramePair>& pairs,
                                   const FeatureExtractor& extractor, double px_tol) {
  BenchmarkResult result;
  for (const auto& pair : pairs) {
    if (!pair.a.gt_pose || !pair.b.gt_pose)
      throw UnsupervisedPairError("matching_benchmark: pair without ground-truth poses");
    const Se3Pose t_ba = relative_pose_from_gt(*pair.a.gt_pose, *pair.b.gt_pose);

    const FrameFeatures fa = extractor.extract(pair.a.gray);
    const FrameFeatures fb = extractor.extract(pair.b.gray);
    result.keypoints += static_cast<std::int64_t>(fa.keypoints.size());

    const std::vector<Match> matches = match_nn(fa.descriptors, fb.descriptors);
    result.matched += static_cast<std::int64_t>(matches.size());
    for (const auto& m : matches) {
      const PixelCoord& anchor = fa.keypoints[static_cast<std::size_t>(m.index_a)].pixel;
      const double z = depth_at(pair.a.depth, anchor);
      if (z <= 0.0 || !std::isfinite(z)) continue;
      const auto warped = warp_correspondence(anchor, z, t_ba, pair.intrinsics);
      if (!warped) continue;
      const PixelCoord& w = warped->pixel;
      if (w.u < 0 || w.v < 0 || w.u > pair.b.gray.width() - 1 ||
          w.v > pair.b.gray.height() - 1)
        continue;
      ++result.evaluated;
      const PixelCoord& got = fb.keypoints[static_cast<std::size_t>(m.index_b)].pixel;
      const double du = got.u - w.u, dv = got.v - w.v;
      if (std::sqrt(du * du + dv * dv) <= px_tol) ++result.correct;
    }
  }
  if (result.evaluated > 0)
    result.precision =
        static_cast<double>(result.correct) / static_cast<double>(result.evaluated);
  if (result.keypoints > 0)
    result.density =
        static_cast<double>(result.matched) / static_cast<double>(result.keypoints);
  return result;
}

}  // namespace binofeat
