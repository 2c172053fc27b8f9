#include "binofeat/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "binofeat/correspondence.hpp"
#include "binofeat/errors.hpp"
#include "binofeat/log.hpp"
#include "binofeat/rng.hpp"

namespace binofeat {

namespace {

std::vector<int> inliers_of(
    const std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>>& matches3d,
    const Se3Pose& pose, double tol) {
  std::vector<int> out;
  for (std::size_t i = 0; i < matches3d.size(); ++i)
    if ((pose.apply(matches3d[i].first) - matches3d[i].second).norm() < tol)
      out.push_back(static_cast<int>(i));
  return out;
}

}  // namespace

MotionEstimate estimate_motion(
    const std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>>& matches3d,
    const RansacConfig& cfg) {
  const int n = static_cast<int>(matches3d.size());
  if (n < 3)
    throw TrackingFailureError("estimate_motion: need >= 3 pairs, got " +
                               std::to_string(n));

  std::mt19937 rng(cfg.seed);
  bool have_model = false;
  Se3Pose best_pose;
  std::size_t best_count = 0;
  double needed = cfg.max_iterations;

  std::vector<Eigen::Vector3d> src(3), dst(3);
  for (int iter = 0; iter < cfg.max_iterations && iter < needed; ++iter) {
    int idx[3];
    idx[0] = uniform_int(rng, 0, n - 1);
    do idx[1] = uniform_int(rng, 0, n - 1);
    while (idx[1] == idx[0]);
    do idx[2] = uniform_int(rng, 0, n - 1);
    while (idx[2] == idx[0] || idx[2] == idx[1]);

    for (int j = 0; j < 3; ++j) {
      src[static_cast<std::size_t>(j)] = matches3d[static_cast<std::size_t>(idx[j])].first;
      dst[static_cast<std::size_t>(j)] = matches3d[static_cast<std::size_t>(idx[j])].second;
    }
    Se3Pose candidate;
    try {
      candidate = rigid_align(src, dst);
    } catch (const DegenerateConfigError&) {
      continue;  // collinear minimal sample
    }
    const std::size_t count = inliers_of(matches3d, candidate, cfg.inlier_tol).size();
    if (count > best_count) {
      best_count = count;
      best_pose = candidate;
      have_model = true;
      const double w = static_cast<double>(count) / n;
      const double p_sample = w * w * w;
      if (p_sample >= 1.0 - 1e-12)
        needed = iter + 1;
      else if (p_sample > 0)
        needed = std::log(1.0 - cfg.confidence) / std::log(1.0 - p_sample);
    }
  }

  const std::size_t floor = std::max<std::size_t>(3, static_cast<std::size_t>(cfg.min_inliers));
  if (!have_model || best_count < floor)
    throw TrackingFailureError("estimate_motion: best consensus " +
                               std::to_string(best_count) + " below " +
                               std::to_string(floor));

  // Refit on the consensus set; keep the minimal-sample pose if the set is
  // degenerate (e.g. all inliers collinear).
  std::vector<int> support = inliers_of(matches3d, best_pose, cfg.inlier_tol);
  std::vector<Eigen::Vector3d> src_in, dst_in;
  src_in.reserve(support.size());
  dst_in.reserve(support.size());
  for (int i : support) {
    src_in.push_back(matches3d[static_cast<std::size_t>(i)].first);
    dst_in.push_back(matches3d[static_cast<std::size_t>(i)].second);
  }
  Se3Pose refined = best_pose;
  try {
    refined = rigid_align(src_in, dst_in);
  } catch (const DegenerateConfigError&) {
  }

  MotionEstimate est;
  est.pose = refined;
  est.inliers = inliers_of(matches3d, refined, cfg.inlier_tol);
  if (est.inliers.size() < support.size()) {  // refit made things worse
    est.pose = best_pose;
    est.inliers = std::move(support);
  }
  return est;
}

namespace {

Keyframe make_keyframe(int frame_index, const Frame& frame, const FrameFeatures& features,
                       const CameraIntrinsics& k, const Se3Pose& world_pose) {
  Keyframe kf;
  kf.frame_index = frame_index;
  kf.world_pose = world_pose;
  for (std::size_t i = 0; i < features.keypoints.size(); ++i) {
    const Keypoint& kp = features.keypoints[i];
    const double z = depth_at(frame.depth, kp.pixel);
    if (z <= 0.0 || !std::isfinite(z)) continue;
    kf.keypoints.push_back(kp);
    kf.descriptors.push_back(features.descriptors[i]);
    kf.points.push_back(backproject(kp.pixel, z, k));
  }
  return kf;
}

}  // namespace

TrackResult track_sequence(const std::vector<Frame>& frames, const CameraIntrinsics& k,
                           const FeatureExtractor& extractor, const TrackConfig& cfg) {
  if (frames.size() < 2)
    throw TrackingFailureError("track_sequence: need >= 2 frames, got " +
                               std::to_string(frames.size()));

  TrackResult result;
  FrameFeatures first = extractor.extract(frames[0].gray);
  Keyframe keyframe = make_keyframe(0, frames[0], first, k, Se3Pose::identity());
  Se3Pose last_pose = Se3Pose::identity();
  result.trajectory.entries.push_back({frames[0].timestamp, last_pose, false});
  result.stats.push_back({frames[0].timestamp, static_cast<int>(first.keypoints.size()),
                          0, 0, false, true});

  for (std::size_t fi = 1; fi < frames.size(); ++fi) {
    const Frame& frame = frames[fi];
    const FrameFeatures features = extractor.extract(frame.gray);

    // 3D-3D correspondences current -> keyframe.
    std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>> matches3d;
    const std::vector<Match> matches =
        match_nn(features.descriptors, keyframe.descriptors, cfg.match);
    for (const auto& m : matches) {
      const Keypoint& kp = features.keypoints[static_cast<std::size_t>(m.index_a)];
      const double z = depth_at(frame.depth, kp.pixel);
      if (z <= 0.0 || !std::isfinite(z)) continue;
      matches3d.emplace_back(backproject(kp.pixel, z, k),
                             keyframe.points[static_cast<std::size_t>(m.index_b)]);
    }

    FrameStat stat;
    stat.timestamp = frame.timestamp;
    stat.keypoints = static_cast<int>(features.keypoints.size());
    stat.matches = static_cast<int>(matches3d.size());

    bool lost = false;
    try {
      const MotionEstimate motion = estimate_motion(matches3d, cfg.ransac);
      stat.inliers = static_cast<int>(motion.inliers.size());
      const Se3Pose composed = keyframe.world_pose.compose(motion.pose);
      last_pose = Se3Pose::orthonormalized(composed.rotation(), composed.translation());

      const double matched_fraction =
          static_cast<double>(matches3d.size()) /
          std::max<std::size_t>(1, features.keypoints.size());
      if (stat.inliers < cfg.kf_inlier_floor || matched_fraction < cfg.kf_match_floor) {
        keyframe = make_keyframe(static_cast<int>(fi), frame, features, k, last_pose);
        stat.keyframe = true;
      }
    } catch (const TrackingFailureError& e) {
      lost = true;
      stat.lost = true;
      log_warn("frame " + std::to_string(fi) + " lost: " + e.what());
    }

    result.trajectory.entries.push_back({frame.timestamp, last_pose, lost});
    result.stats.push_back(stat);
  }
  return result;
}

StatsReport stats_report(const std::vector<FrameStat>& stats) {
  StatsReport report;
  if (stats.empty()) return report;

  std::vector<double> kps, fractions;
  for (const auto& s : stats) {
    kps.push_back(s.keypoints);
    if (s.lost) ++report.lost_frames;
    if (s.matches > 0) {
      ++report.tracked_frames;
      fractions.push_back(static_cast<double>(s.inliers) / s.matches);
    }
  }
  auto mean = [](const std::vector<double>& v) {
    double acc = 0;
    for (double x : v) acc += x;
    return v.empty() ? 0.0 : acc / static_cast<double>(v.size());
  };
  auto median = [](std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
  };
  report.mean_keypoints = mean(kps);
  report.median_keypoints = median(kps);
  report.mean_inlier_fraction = mean(fractions);
  report.median_inlier_fraction = median(fractions);
  return report;
}

void write_stats_csv(const std::string& path, const std::vector<FrameStat>& stats) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot write stats: " + path);
  os << "timestamp,keypoints,matches,inliers\n";
  char line[128];
  for (const auto& s : stats) {
    std::snprintf(line, sizeof(line), "%.6f,%d,%d,%d\n", s.timestamp, s.keypoints,
                  s.matches, s.inliers);
    os << line;
  }
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace binofeat
