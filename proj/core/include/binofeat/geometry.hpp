#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <optional>
#include <vector>

namespace binofeat {

// Continuous image coordinates, (u,v) = (column, row).
struct PixelCoord {
  double u = 0.0;
  double v = 0.0;
};

// Pinhole camera. Projection:  (X,Y,Z) -> (fx*X/Z + cx, fy*Y/Z + cy).
// depth_scale divides stored integer depth values into meters
// (5000 for 16-bit TUM depth PNGs).
struct CameraIntrinsics {
  double fx = 0, fy = 0;
  double cx = 0, cy = 0;
  int width = 0, height = 0;
  double depth_scale = 5000.0;

  // Throws ShapeError if the invariants do not hold (fx,fy > 0,
  // principal point inside the image, depth_scale > 0).
  void validate() const;

  // Intrinsics for an image resized to (new_w, new_h), pixel-center convention.
  CameraIntrinsics scaled(int new_w, int new_h) const;
};

// Rigid body transform: X' = R * X + t. The rotation is validated at
// construction (R^T R = I and det R = 1, both within 1e-9) and trusted
// afterwards; composition chains should be re-orthonormalized periodically
// via orthonormalized().
class Se3Pose {
 public:
  Se3Pose() : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}
  Se3Pose(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation);

  static Se3Pose identity() { return Se3Pose(); }

  // Projects an arbitrary matrix to the nearest rotation before constructing.
  static Se3Pose orthonormalized(const Eigen::Matrix3d& rotation_like,
                                 const Eigen::Vector3d& translation);

  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Eigen::Vector3d& translation() const { return translation_; }

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
    return rotation_ * p + translation_;
  }

  Se3Pose inverse() const;
  // this * other: apply `other` first, then `this`.
  Se3Pose compose(const Se3Pose& other) const;

  // Max deviation of R^T R from identity (for drift monitoring).
  double orthonormality_error() const;

 private:
  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
};

// Pixel + depth -> camera-frame 3D point ((u-cx)z/fx, (v-cy)z/fy, z).
// Throws InvalidDepthError for non-positive or non-finite depth.
Eigen::Vector3d backproject(const PixelCoord& p, double depth_m,
                            const CameraIntrinsics& k);

// Camera-frame 3D point -> pixel. No bounds clamping.
// Throws BehindCameraError for Z <= 0.
PixelCoord project(const Eigen::Vector3d& point, const CameraIntrinsics& k);

struct WarpedPixel {
  PixelCoord pixel;
  double depth = 0.0;  // Z of the transformed point, for occlusion checks
};

// Transfers a pixel observed at depth_m in frame A into frame B using the
// relative pose t_ab (A-camera coordinates -> B-camera coordinates):
//   project(t_ab * backproject(p, depth_m)).
// Returns nullopt when the pixel has no valid correspondence (invalid depth
// or the transformed point ends up behind the camera).
std::optional<WarpedPixel> warp_correspondence(const PixelCoord& p, double depth_m,
                                               const Se3Pose& t_ab,
                                               const CameraIntrinsics& k);

// Closed-form least-squares rigid alignment: finds R, t minimizing
// sum ||R*src_i + t - dst_i||^2 (scale fixed to 1). Requires >= 3 pairs in
// a non-degenerate (non-collinear) configuration; throws
// DegenerateConfigError otherwise. Handles coplanar sets via the SVD sign
// correction.
Se3Pose rigid_align(const std::vector<Eigen::Vector3d>& src,
                    const std::vector<Eigen::Vector3d>& dst);

}  // namespace binofeat
