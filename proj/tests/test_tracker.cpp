#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "binofeat/errors.hpp"
#include "binofeat/rng.hpp"
#include "binofeat/synth.hpp"
#include "binofeat/tracker.hpp"
#include "doctest.h"

using namespace binofeat;

namespace {

Se3Pose random_pose(std::mt19937& rng, double max_angle, double max_shift) {
  const Eigen::Vector3d axis =
      Eigen::Vector3d(uniform_double(rng, -1, 1), uniform_double(rng, -1, 1),
                      uniform_double(rng, -1, 1))
          .normalized();
  const double angle = uniform_double(rng, -max_angle, max_angle);
  const Eigen::Matrix3d r = Eigen::AngleAxisd(angle, axis).toRotationMatrix();
  const Eigen::Vector3d t(uniform_double(rng, -max_shift, max_shift),
                          uniform_double(rng, -max_shift, max_shift),
                          uniform_double(rng, -max_shift, max_shift));
  return Se3Pose::orthonormalized(r, t);
}

std::vector<Eigen::Vector3d> random_cloud(std::mt19937& rng, int n) {
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    pts.emplace_back(uniform_double(rng, -2, 2), uniform_double(rng, -2, 2),
                     uniform_double(rng, 1, 5));
  return pts;
}

double pose_error(const Se3Pose& a, const Se3Pose& b) {
  return (a.rotation() - b.rotation()).norm() + (a.translation() - b.translation()).norm();
}

}  // namespace

TEST_CASE("estimate_motion recovers an exact rigid transform from clean matches") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const Se3Pose truth = random_pose(rng, 0.5, 0.5);
    const std::vector<Eigen::Vector3d> cloud = random_cloud(rng, 50);
    std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>> matches;
    for (const auto& p : cloud) matches.emplace_back(p, truth.apply(p));
    RansacConfig cfg;
    cfg.seed = static_cast<std::uint32_t>(trial);
    const MotionEstimate est = estimate_motion(matches, cfg);
    CHECK(pose_error(est.pose, truth) < 1e-9);
    CHECK(est.inliers.size() == cloud.size());
  }
}

TEST_CASE("estimate_motion isolates the clean set under 30 percent outliers") {
  std::mt19937 rng(43);
  const Se3Pose truth = random_pose(rng, 0.4, 0.4);
  const std::vector<Eigen::Vector3d> cloud = random_cloud(rng, 60);
  std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>> matches;
  std::set<int> outlier_idx;
  for (int i = 0; i < 60; ++i) {
    Eigen::Vector3d dst = truth.apply(cloud[static_cast<std::size_t>(i)]);
    if (i % 10 < 3) {  // 30% corrupted far outside the 5 cm gate
      dst += Eigen::Vector3d(uniform_double(rng, 0.5, 2.0), uniform_double(rng, 0.5, 2.0),
                             uniform_double(rng, 0.5, 2.0));
      outlier_idx.insert(i);
    }
    matches.emplace_back(cloud[static_cast<std::size_t>(i)], dst);
  }
  RansacConfig cfg;
  cfg.seed = 7;
  const MotionEstimate est = estimate_motion(matches, cfg);
  CHECK(pose_error(est.pose, truth) < 1e-9);
  REQUIRE(est.inliers.size() == 42);
  for (int i : est.inliers) CHECK(outlier_idx.count(i) == 0);
}

TEST_CASE("estimate_motion failure modes") {
  std::mt19937 rng(47);
  const Se3Pose truth = random_pose(rng, 0.3, 0.3);
  std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>> matches;
  for (const auto& p : random_cloud(rng, 2)) matches.emplace_back(p, truth.apply(p));
  CHECK_THROWS_AS(estimate_motion(matches, RansacConfig{}), TrackingFailureError);

  // Twelve clean pairs cannot satisfy the default floor of twenty inliers.
  matches.clear();
  for (const auto& p : random_cloud(rng, 12)) matches.emplace_back(p, truth.apply(p));
  CHECK_THROWS_AS(estimate_motion(matches, RansacConfig{}), TrackingFailureError);

  // Lowering the floor makes the same data usable.
  RansacConfig relaxed;
  relaxed.min_inliers = 5;
  const MotionEstimate est = estimate_motion(matches, relaxed);
  CHECK(est.inliers.size() == 12);
}

TEST_CASE("estimate_motion is deterministic in the seed") {
  std::mt19937 rng(53);
  const Se3Pose truth = random_pose(rng, 0.4, 0.4);
  std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>> matches;
  int i = 0;
  for (const auto& p : random_cloud(rng, 40)) {
    Eigen::Vector3d dst = truth.apply(p);
    if (++i % 5 == 0) dst += Eigen::Vector3d(1.0, -0.7, 0.9);
    matches.emplace_back(p, dst);
  }
  RansacConfig cfg;
  cfg.seed = 99;
  const MotionEstimate a = estimate_motion(matches, cfg);
  const MotionEstimate b = estimate_motion(matches, cfg);
  CHECK(a.inliers == b.inliers);
  CHECK((a.pose.rotation() - b.pose.rotation()).norm() == 0.0);
  CHECK((a.pose.translation() - b.pose.translation()).norm() == 0.0);
}

TEST_CASE("track_sequence follows a synthetic trajectory") {
  SequenceSpec spec;
  spec.frames = 12;
  spec.path_length = 0.12;
  const LoadedSequence seq = make_sequence(160, 128, spec);
  REQUIRE(seq.frames.size() == 12);

  const ClassicalExtractor extractor{ClassicalConfig{}};
  TrackConfig cfg;
  cfg.ransac.seed = 5;
  const TrackResult result = track_sequence(seq.frames, seq.intrinsics, extractor, cfg);

  REQUIRE(result.trajectory.entries.size() == 12);
  REQUIRE(result.stats.size() == 12);
  CHECK(result.stats[0].keyframe);
  CHECK((result.trajectory.entries[0].pose.rotation() - Eigen::Matrix3d::Identity())
            .norm() == 0.0);
  for (const auto& e : result.trajectory.entries) CHECK_FALSE(e.lost);
  for (std::size_t fi = 0; fi < seq.frames.size(); ++fi)
    CHECK(result.trajectory.entries[fi].timestamp == seq.frames[fi].timestamp);

  // Estimated pose (world = first camera) vs ground truth relative pose.
  const Se3Pose gt0_inv = seq.frames[0].gt_pose->inverse();
  for (std::size_t fi = 0; fi < seq.frames.size(); ++fi) {
    const Se3Pose rel_gt = gt0_inv.compose(*seq.frames[fi].gt_pose);
    const Se3Pose& est = result.trajectory.entries[fi].pose;
    CHECK((est.translation() - rel_gt.translation()).norm() < 0.02);
  }
}

TEST_CASE("track_sequence holds the pose over a lost frame and recovers") {
  SequenceSpec spec;
  spec.frames = 6;
  spec.path_length = 0.05;
  LoadedSequence seq = make_sequence(160, 128, spec);
  // A textureless frame produces no keypoints, so matching must fail.
  seq.frames[3].gray = ImageF32(160, 128, 0.5f);

  const ClassicalExtractor extractor{ClassicalConfig{}};
  TrackConfig cfg;
  cfg.ransac.seed = 5;
  const TrackResult result = track_sequence(seq.frames, seq.intrinsics, extractor, cfg);

  REQUIRE(result.trajectory.entries.size() == 6);
  CHECK(result.stats[3].lost);
  CHECK(result.trajectory.entries[3].lost);
  CHECK(result.stats[3].keypoints == 0);
  // Held pose equals the previous frame's estimate.
  CHECK((result.trajectory.entries[3].pose.translation() -
         result.trajectory.entries[2].pose.translation())
            .norm() == 0.0);
  // The frames around the gap track normally.
  CHECK_FALSE(result.stats[2].lost);
  CHECK_FALSE(result.stats[4].lost);
  CHECK_FALSE(result.stats[5].lost);
}

TEST_CASE("track_sequence needs at least two frames") {
  SequenceSpec spec;
  spec.frames = 2;
  const LoadedSequence seq = make_sequence(64, 48, spec);
  const std::vector<Frame> single(seq.frames.begin(), seq.frames.begin() + 1);
  const ClassicalExtractor extractor{ClassicalConfig{}};
  CHECK_THROWS_AS(track_sequence(single, seq.intrinsics, extractor, TrackConfig{}),
                  TrackingFailureError);
}

TEST_CASE("stats_report aggregates keypoints and inlier fractions") {
  std::vector<FrameStat> stats;
  stats.push_back({0.0, 10, 0, 0, false, true});
  stats.push_back({0.1, 20, 10, 5, false, false});
  stats.push_back({0.2, 30, 8, 8, false, false});
  stats.push_back({0.3, 40, 16, 4, true, false});
  const StatsReport r = stats_report(stats);
  CHECK(r.mean_keypoints == doctest::Approx(25.0));
  CHECK(r.median_keypoints == doctest::Approx(25.0));
  CHECK(r.mean_inlier_fraction == doctest::Approx((0.5 + 1.0 + 0.25) / 3.0));
  CHECK(r.median_inlier_fraction == doctest::Approx(0.5));
  CHECK(r.tracked_frames == 3);
  CHECK(r.lost_frames == 1);

  const StatsReport empty = stats_report({});
  CHECK(empty.mean_keypoints == 0.0);
  CHECK(empty.tracked_frames == 0);
}

TEST_CASE("stats csv format is stable") {
  std::vector<FrameStat> stats;
  stats.push_back({1000.25, 120, 80, 60, false, true});
  stats.push_back({1000.291667, 115, 70, 55, false, false});
  const std::string path = (std::filesystem::temp_directory_path() /
                            "binofeat_stats.csv")
                               .string();
  write_stats_csv(path, stats);
  std::ifstream is(path);
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "timestamp,keypoints,matches,inliers");
  REQUIRE(std::getline(is, line));
  CHECK(line == "1000.250000,120,80,60");
  REQUIRE(std::getline(is, line));
  CHECK(line == "1000.291667,115,70,55");
  CHECK_FALSE(std::getline(is, line));
  is.close();
  std::remove(path.c_str());
}
