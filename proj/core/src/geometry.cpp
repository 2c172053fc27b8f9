#include "binofeat/geometry.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <string>

#include "binofeat/errors.hpp"

namespace binofeat {

namespace {
constexpr double kRotationTol = 1e-9;
}

void CameraIntrinsics::validate() const {
  if (!(fx > 0) || !(fy > 0))
    throw ShapeError("intrinsics: focal lengths must be positive");
  if (!(cx >= 0 && cx < width) || !(cy >= 0 && cy < height))
    throw ShapeError("intrinsics: principal point outside image");
  if (!(depth_scale > 0))
    throw ShapeError("intrinsics: depth_scale must be positive");
}

CameraIntrinsics CameraIntrinsics::scaled(int new_w, int new_h) const {
  const double sx = static_cast<double>(new_w) / width;
  const double sy = static_cast<double>(new_h) / height;
  CameraIntrinsics k = *this;
  k.fx = fx * sx;
  k.fy = fy * sy;
  // Pixel centers: u' = (u + 0.5) * s - 0.5
  k.cx = (cx + 0.5) * sx - 0.5;
  k.cy = (cy + 0.5) * sy - 0.5;
  k.width = new_w;
  k.height = new_h;
  return k;
}

Se3Pose::Se3Pose(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation)
    : rotation_(rotation), translation_(translation) {
  const double ortho = (rotation.transpose() * rotation - Eigen::Matrix3d::Identity())
                           .cwiseAbs()
                           .maxCoeff();
  const double det = rotation.determinant();
  if (ortho > kRotationTol || std::abs(det - 1.0) > kRotationTol)
    throw NumericError("Se3Pose: matrix is not a rotation (orthogonality " +
                       std::to_string(ortho) + ", det " + std::to_string(det) + ")");
}

Se3Pose Se3Pose::orthonormalized(const Eigen::Matrix3d& rotation_like,
                                 const Eigen::Vector3d& translation) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(rotation_like,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0) {
    Eigen::Matrix3d u = svd.matrixU();
    u.col(2) *= -1.0;
    r = u * svd.matrixV().transpose();
  }
  return Se3Pose(r, translation);
}

Se3Pose Se3Pose::inverse() const {
  const Eigen::Matrix3d rt = rotation_.transpose();
  return Se3Pose(rt, -(rt * translation_));
}

Se3Pose Se3Pose::compose(const Se3Pose& other) const {
  // Compose without re-validating: both factors already satisfy the
  // invariants, the product can drift by at most a few ulp per step.
  Se3Pose out;
  out.rotation_ = rotation_ * other.rotation_;
  out.translation_ = rotation_ * other.translation_ + translation_;
  return out;
}

double Se3Pose::orthonormality_error() const {
  return (rotation_.transpose() * rotation_ - Eigen::Matrix3d::Identity())
      .cwiseAbs()
      .maxCoeff();
}

Eigen::Vector3d backproject(const PixelCoord& p, double depth_m,
                            const CameraIntrinsics& k) {
  if (!(depth_m > 0) || !std::isfinite(depth_m))
    throw InvalidDepthError("backproject: depth " + std::to_string(depth_m));
  return {(p.u - k.cx) * depth_m / k.fx, (p.v - k.cy) * depth_m / k.fy, depth_m};
}

PixelCoord project(const Eigen::Vector3d& point, const CameraIntrinsics& k) {
  if (!(point.z() > 0))
    throw BehindCameraError("project: Z = " + std::to_string(point.z()));
  return {k.fx * point.x() / point.z() + k.cx, k.fy * point.y() / point.z() + k.cy};
}

std::optional<WarpedPixel> warp_correspondence(const PixelCoord& p, double depth_m,
                                               const Se3Pose& t_ab,
                                               const CameraIntrinsics& k) {
  if (!(depth_m > 0) || !std::isfinite(depth_m)) return std::nullopt;
  const Eigen::Vector3d transformed = t_ab.apply(backproject(p, depth_m, k));
  if (!(transformed.z() > 0)) return std::nullopt;
  return WarpedPixel{project(transformed, k), transformed.z()};
}

Se3Pose rigid_align(const std::vector<Eigen::Vector3d>& src,
                    const std::vector<Eigen::Vector3d>& dst) {
  if (src.size() != dst.size())
    throw ShapeError("rigid_align: size mismatch " + std::to_string(src.size()) +
                     " vs " + std::to_string(dst.size()));
  const std::size_t n = src.size();
  if (n < 3)
    throw DegenerateConfigError("rigid_align: need >= 3 pairs, got " + std::to_string(n));

  Eigen::Vector3d c_src = Eigen::Vector3d::Zero();
  Eigen::Vector3d c_dst = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    c_src += src[i];
    c_dst += dst[i];
  }
  c_src /= static_cast<double>(n);
  c_dst /= static_cast<double>(n);

  // Cross-covariance H = sum (dst_i - c_dst)(src_i - c_src)^T,
  // so that R = U S V^T maps src toward dst.
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  double spread = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector3d ds = src[i] - c_src;
    h += (dst[i] - c_dst) * ds.transpose();
    spread += ds.squaredNorm();
  }

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d sv = svd.singularValues();
  // Collinear or coincident points leave the rotation under-determined:
  // the second singular value collapses.
  const double scale = std::max(sv(0), spread / static_cast<double>(n));
  if (sv(1) <= 1e-12 * std::max(scale, 1.0))
    throw DegenerateConfigError("rigid_align: rank-deficient cross-covariance");

  Eigen::Matrix3d s = Eigen::Matrix3d::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0) s(2, 2) = -1.0;
  const Eigen::Matrix3d r = svd.matrixU() * s * svd.matrixV().transpose();
  return Se3Pose::orthonormalized(r, c_dst - r * c_src);
}

}  // namespace binofeat
