#include <Eigen/Geometry>
#include <cmath>

#include "binofeat/correspondence.hpp"
#include "binofeat/errors.hpp"
#include "binofeat/geometry.hpp"
#include "doctest.h"

using namespace binofeat;

namespace {

CameraIntrinsics small_intrinsics() {
  CameraIntrinsics k;
  k.fx = k.fy = 100.0;
  k.cx = 31.5;
  k.cy = 23.5;
  k.width = 64;
  k.height = 48;
  return k;
}

// Frame with constant depth, optional ground-truth pose.
Frame flat_frame(const CameraIntrinsics& k, float depth, const Se3Pose& pose) {
  Frame f;
  f.gray = ImageF32(k.width, k.height, 0.5f);
  f.depth = ImageF32(k.width, k.height, depth);
  f.gt_pose = pose;
  return f;
}

}  // namespace

TEST_CASE("relative_pose_from_gt maps frame A points into frame B") {
  const Se3Pose world_a(Eigen::AngleAxisd(0.3, Eigen::Vector3d::UnitY()).toRotationMatrix(),
                        {1, 2, 3});
  const Se3Pose world_b(Eigen::AngleAxisd(-0.2, Eigen::Vector3d::UnitX()).toRotationMatrix(),
                        {0, -1, 2});
  const Se3Pose t_ba = relative_pose_from_gt(world_a, world_b);
  const Eigen::Vector3d p_a(0.4, -0.2, 1.5);
  const Eigen::Vector3d world = world_a.apply(p_a);
  const Eigen::Vector3d p_b = world_b.inverse().apply(world);
  CHECK((t_ba.apply(p_a) - p_b).norm() < 1e-12);
}

TEST_CASE("depth_at reads the nearest pixel and is zero outside") {
  ImageF32 depth(4, 4, 0.f);
  depth.at(2, 1) = 2.5f;
  CHECK(depth_at(depth, {2.4, 1.4}) == doctest::Approx(2.5));
  CHECK(depth_at(depth, {1.6, 0.6}) == doctest::Approx(2.5));
  CHECK(depth_at(depth, {2.6, 1.0}) == doctest::Approx(0.0));
  CHECK(depth_at(depth, {-1.0, 1.0}) == doctest::Approx(0.0));
  CHECK(depth_at(depth, {2.0, 7.0}) == doctest::Approx(0.0));
}

TEST_CASE("make_correspondences warps through the ground-truth poses") {
  const CameraIntrinsics k = small_intrinsics();
  const Se3Pose world_a;  // identity
  const Se3Pose world_b(Eigen::Matrix3d::Identity(), {0.1, 0, 0});  // B shifted +x
  const Frame a = flat_frame(k, 2.0f, world_a);
  const Frame b = flat_frame(k, 2.0f, world_b);

  std::vector<PixelCoord> samples{{31.5, 23.5}, {10, 10}};
  const CorrespondenceSet set = make_correspondences(a, b, samples, k, {}, 3, 4);
  CHECK(set.frame_a == 3);
  CHECK(set.frame_b == 4);
  REQUIRE(set.pairs.size() == 2);
  // Camera moved +0.1 in x, so points shift -0.1 in B's camera frame:
  // u' = u - fx*0.1/z = u - 5.
  CHECK(set.pairs[0].first.u == doctest::Approx(31.5));
  CHECK(set.pairs[0].second.u == doctest::Approx(26.5).epsilon(1e-9));
  CHECK(set.pairs[0].second.v == doctest::Approx(23.5).epsilon(1e-9));
  CHECK(set.pairs[1].second.u == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("make_correspondences drops invalid depth and out-of-bounds warps") {
  const CameraIntrinsics k = small_intrinsics();
  const Se3Pose world_a;
  const Se3Pose world_b(Eigen::Matrix3d::Identity(), {1.0, 0, 0});  // big shift
  Frame a = flat_frame(k, 2.0f, world_a);
  const Frame b = flat_frame(k, 2.0f, world_b);
  a.depth.at(5, 5) = 0.f;  // missing depth in A

  // (5,5) has no depth; (60,24) warps 50 px left -> u' = 10 (in bounds);
  // (3,24) warps to u' = -47 (out).
  std::vector<PixelCoord> samples{{5, 5}, {60, 24}, {3, 24}};
  const CorrespondenceSet set = make_correspondences(a, b, samples, k);
  REQUIRE(set.pairs.size() == 1);
  CHECK(set.pairs[0].first.u == doctest::Approx(60));
  CHECK(set.pairs[0].second.u == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("make_correspondences applies the occlusion test against frame B depth") {
  const CameraIntrinsics k = small_intrinsics();
  const Se3Pose world_a;
  const Se3Pose world_b;  // same viewpoint: warped depth == 2.0 everywhere
  const Frame a = flat_frame(k, 2.0f, world_a);

  Frame closer = flat_frame(k, 1.0f, world_b);  // B sees something much closer
  std::vector<PixelCoord> samples{{20, 20}};
  CHECK(make_correspondences(a, closer, samples, k).pairs.empty());

  // Within 5% relative tolerance: 1.91 vs 2.0 -> |0.09| <= 0.05*2 = 0.1 keeps it.
  Frame near_b = flat_frame(k, 1.91f, world_b);
  CHECK(make_correspondences(a, near_b, samples, k).pairs.size() == 1);

  // Missing depth in B cannot veto the correspondence.
  Frame no_depth_b = flat_frame(k, 0.0f, world_b);
  CHECK(make_correspondences(a, no_depth_b, samples, k).pairs.size() == 1);
}

TEST_CASE("make_correspondences respects the border margin") {
  const CameraIntrinsics k = small_intrinsics();
  const Frame a = flat_frame(k, 2.0f, Se3Pose());
  const Frame b = flat_frame(k, 2.0f, Se3Pose());
  std::vector<PixelCoord> samples{{1.0, 24.0}};
  CHECK(make_correspondences(a, b, samples, k).pairs.size() == 1);
  CorrespondenceConfig cfg;
  cfg.border = 4.0;  // warped u = 1.0 < 4 violates the margin
  CHECK(make_correspondences(a, b, samples, k, cfg).pairs.empty());
}

TEST_CASE("make_correspondences requires ground truth on both frames") {
  const CameraIntrinsics k = small_intrinsics();
  Frame a = flat_frame(k, 2.0f, Se3Pose());
  Frame b = flat_frame(k, 2.0f, Se3Pose());
  b.gt_pose.reset();
  std::vector<PixelCoord> samples{{20, 20}};
  CHECK_THROWS_AS(make_correspondences(a, b, samples, k), UnsupervisedPairError);
}
