#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "binofeat/extractor.hpp"
#include "binofeat/geometry.hpp"
#include "binofeat/matcher.hpp"
#include "binofeat/tum_dataset.hpp"

namespace binofeat {

struct RansacConfig {
  double inlier_tol = 0.05;   // meters on ||T*P_a - P_b||
  int min_inliers = 20;
  double confidence = 0.999;  // drives the adaptive iteration cap
  int max_iterations = 1000;
  std::uint32_t seed = 0;
};

struct MotionEstimate {
  Se3Pose pose;              // maps first-of-pair points onto second-of-pair
  std::vector<int> inliers;  // indices into the input pairs
};

// RANSAC over 3D-3D correspondences with 3-point minimal samples solved in
// closed form, followed by a refit on the consensus set. Throws
// TrackingFailureError when fewer than 3 pairs are given or no model reaches
// min_inliers.
MotionEstimate estimate_motion(
    const std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>>& matches3d,
    const RansacConfig& cfg);

struct Keyframe {
  int frame_index = 0;
  std::vector<Keypoint> keypoints;            // only those with valid depth
  std::vector<BinaryDescriptor> descriptors;  // index-aligned with keypoints
  std::vector<Eigen::Vector3d> points;        // backprojected, camera frame
  Se3Pose world_pose;                         // camera-to-world
};

struct TrackConfig {
  RansacConfig ransac;
  MatchConfig match;
  int kf_inlier_floor = 50;     // new keyframe below this inlier count
  double kf_match_floor = 0.3;  // ... or below this matched fraction
};

struct FrameStat {
  double timestamp = 0.0;
  int keypoints = 0;
  int matches = 0;  // matches with valid depth on both sides
  int inliers = 0;
  bool lost = false;
  bool keyframe = false;
};

struct TrackResult {
  Trajectory trajectory;
  std::vector<FrameStat> stats;
};

// Frame-to-keyframe tracking: the first frame anchors the trajectory at the
// origin; every later frame is matched against the current keyframe
// (nearest-neighbor with cross-check), its motion estimated by RANSAC, and
// its world pose composed and re-orthonormalized. Low inlier counts or match
// fractions promote the frame to a new keyframe. A failed estimate marks the
// frame lost and holds the last pose.
TrackResult track_sequence(const std::vector<Frame>& frames, const CameraIntrinsics& k,
                           const FeatureExtractor& extractor, const TrackConfig& cfg);

struct StatsReport {
  double mean_keypoints = 0;
  double median_keypoints = 0;
  double mean_inlier_fraction = 0;    // over frames with at least one match
  double median_inlier_fraction = 0;
  int tracked_frames = 0;
  int lost_frames = 0;
};

StatsReport stats_report(const std::vector<FrameStat>& stats);

// "timestamp,keypoints,matches,inliers" with fixed formatting.
void write_stats_csv(const std::string& path, const std::vector<FrameStat>& stats);

}  // namespace binofeat
