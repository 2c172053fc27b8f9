#include "binofeat/synth.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "binofeat/errors.hpp"
#include "binofeat/image_io.hpp"
#include "binofeat/rng.hpp"

namespace binofeat {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double lattice_value(std::uint64_t seed, int face, int octave, std::int64_t ix,
                     std::int64_t iy) {
  std::uint64_t h = mix64(seed ^ mix64((static_cast<std::uint64_t>(face) << 8) |
                                       static_cast<std::uint64_t>(octave)));
  h = mix64(h ^ static_cast<std::uint64_t>(ix));
  h = mix64(h ^ static_cast<std::uint64_t>(iy));
  return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
}

double value_noise(std::uint64_t seed, int face, double u, double v) {
  static constexpr double kCell[3] = {0.8, 0.25, 0.08};
  static constexpr double kAmp[3] = {0.5, 0.3, 0.2};
  // Each octave's lattice is rotated and offset so that texture corners do
  // not line up on a single image-axis-aligned grid. An aligned grid makes
  // integer-pixel detection errors phase-coherent across the whole image
  // under uniform optical flow, which biases pose estimates.
  static constexpr double kAngle[3] = {0.35, 1.05, 1.95};
  static constexpr double kShift[3][2] = {{0.0, 0.0}, {7.13, 3.71}, {2.39, 5.17}};
  double total = 0.0;
  for (int oct = 0; oct < 3; ++oct) {
    const double ca = std::cos(kAngle[oct]), sa = std::sin(kAngle[oct]);
    const double ru = ca * u - sa * v + kShift[oct][0];
    const double rv = sa * u + ca * v + kShift[oct][1];
    const double su = ru / kCell[oct], sv = rv / kCell[oct];
    const double fu = std::floor(su), fv = std::floor(sv);
    const std::int64_t ix = static_cast<std::int64_t>(fu);
    const std::int64_t iy = static_cast<std::int64_t>(fv);
    const double tu = su - fu, tv = sv - fv;
    const double v00 = lattice_value(seed, face, oct, ix, iy);
    const double v10 = lattice_value(seed, face, oct, ix + 1, iy);
    const double v01 = lattice_value(seed, face, oct, ix, iy + 1);
    const double v11 = lattice_value(seed, face, oct, ix + 1, iy + 1);
    total += kAmp[oct] * ((1 - tu) * (1 - tv) * v00 + tu * (1 - tv) * v10 +
                          (1 - tu) * tv * v01 + tu * tv * v11);
  }
  return total;
}

struct Face {
  int axis;       // fixed coordinate
  double offset;  // its value
};

}  // namespace

CameraIntrinsics synth_intrinsics(int width, int height) {
  CameraIntrinsics k;
  k.fx = k.fy = 0.8 * width;
  k.cx = 0.5 * (width - 1);
  k.cy = 0.5 * (height - 1);
  k.width = width;
  k.height = height;
  k.validate();
  return k;
}

Frame render_frame(const SceneConfig& scene, const CameraIntrinsics& k,
                   const Se3Pose& cam_to_world, double timestamp) {
  const Eigen::Vector3d o = cam_to_world.translation();
  if (std::abs(o.x()) >= scene.half_x || std::abs(o.y()) >= scene.half_y ||
      o.z() <= scene.z_near || o.z() >= scene.z_far)
    throw DegenerateConfigError("render_frame: camera outside the box");

  const Face faces[6] = {{0, -scene.half_x}, {0, scene.half_x}, {1, -scene.half_y},
                         {1, scene.half_y},  {2, scene.z_near}, {2, scene.z_far}};

  Frame frame;
  frame.timestamp = timestamp;
  frame.gt_pose = cam_to_world;
  frame.gray = ImageF32(k.width, k.height);
  frame.depth = ImageF32(k.width, k.height);

  const Eigen::Matrix3d& rot = cam_to_world.rotation();
  for (int y = 0; y < k.height; ++y)
    for (int x = 0; x < k.width; ++x) {
      // dir has camera-frame z = 1, so the ray parameter is the depth.
      const Eigen::Vector3d dir_cam((x - k.cx) / k.fx, (y - k.cy) / k.fy, 1.0);
      const Eigen::Vector3d d = rot * dir_cam;

      double best_t = 0.0;
      int best_face = -1;
      for (int f = 0; f < 6; ++f) {
        const double denom = d[faces[f].axis];
        if (std::abs(denom) < 1e-12) continue;
        const double t = (faces[f].offset - o[faces[f].axis]) / denom;
        if (t > 1e-6 && (best_face < 0 || t < best_t)) {
          best_t = t;
          best_face = f;
        }
      }
      if (best_face < 0)
        throw NumericError("render_frame: ray escaped the box");  // unreachable

      const Eigen::Vector3d p = o + best_t * d;
      double u, v;
      switch (faces[best_face].axis) {
        case 0: u = p.z(); v = p.y(); break;
        case 1: u = p.x(); v = p.z(); break;
        default: u = p.x(); v = p.y(); break;
      }
      frame.gray.at(x, y) =
          static_cast<float>(0.1 + 0.8 * value_noise(scene.seed, best_face, u, v));
      frame.depth.at(x, y) = static_cast<float>(best_t);
    }
  return frame;
}

namespace {

Se3Pose random_small_motion(std::mt19937& rng, double min_angle, double max_angle,
                            double min_shift, double max_shift) {
  Eigen::Vector3d axis(normal_double(rng), normal_double(rng), normal_double(rng));
  if (axis.norm() < 1e-9) axis = Eigen::Vector3d::UnitZ();
  axis.normalize();
  const double angle = uniform_double(rng, min_angle, max_angle);
  Eigen::Vector3d dir(normal_double(rng), normal_double(rng), normal_double(rng));
  if (dir.norm() < 1e-9) dir = Eigen::Vector3d::UnitX();
  dir.normalize();
  const double shift = uniform_double(rng, min_shift, max_shift);
  return Se3Pose(Eigen::AngleAxisd(angle, axis).toRotationMatrix(), shift * dir);
}

}  // namespace

std::vector<FramePair> make_training_pairs(int count, int width, int height,
                                           std::uint32_t seed,
                                           const SceneConfig& scene) {
  if (count < 1) throw ShapeError("make_training_pairs: count must be >= 1");
  const CameraIntrinsics k = synth_intrinsics(width, height);
  std::mt19937 rng(seed);

  std::vector<FramePair> pairs;
  pairs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const Eigen::Vector3d pos(uniform_double(rng, -0.3, 0.3),
                              uniform_double(rng, -0.2, 0.2),
                              uniform_double(rng, -0.3, 0.3));
    const Eigen::Matrix3d rot =
        (Eigen::AngleAxisd(uniform_double(rng, -0.06, 0.06), Eigen::Vector3d::UnitY()) *
         Eigen::AngleAxisd(uniform_double(rng, -0.04, 0.04), Eigen::Vector3d::UnitX()) *
         Eigen::AngleAxisd(uniform_double(rng, -0.04, 0.04), Eigen::Vector3d::UnitZ()))
            .toRotationMatrix();
    const Se3Pose pose_a(rot, pos);
    const Se3Pose pose_b =
        pose_a.compose(random_small_motion(rng, 0.017, 0.07, 0.05, 0.15));

    FramePair pair;
    pair.intrinsics = k;
    pair.a = render_frame(scene, k, pose_a, 2.0 * i);
    pair.b = render_frame(scene, k, pose_b, 2.0 * i + 0.033);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

LoadedSequence make_sequence(int width, int height, const SequenceSpec& spec,
                             const SceneConfig& scene) {
  if (spec.frames < 2) throw ShapeError("make_sequence: need >= 2 frames");
  LoadedSequence seq;
  seq.intrinsics = synth_intrinsics(width, height);
  seq.frames.reserve(static_cast<std::size_t>(spec.frames));
  for (int i = 0; i < spec.frames; ++i) {
    const double s = static_cast<double>(i) / (spec.frames - 1);
    // Sideways track with a gentle depth bob: the z component makes the
    // optical flow field non-uniform, so detection quantization errors do
    // not line up across the image.
    const Eigen::Vector3d pos(-0.5 * spec.path_length + spec.path_length * s,
                              spec.y_bob * std::sin(4.0 * M_PI * s),
                              spec.z_base + spec.z_bob * std::sin(2.0 * M_PI * s));
    const double yaw = spec.yaw_amplitude * std::sin(2.0 * M_PI * s);
    const Se3Pose pose(Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitY()).toRotationMatrix(),
                       pos);
    seq.frames.push_back(
        render_frame(scene, seq.intrinsics, pose, spec.t0 + i / spec.fps));
  }
  return seq;
}

void write_tum_sequence(const std::string& dir, const LoadedSequence& seq) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(fs::path(dir) / "rgb", ec);
  fs::create_directories(fs::path(dir) / "depth", ec);
  if (ec) throw IoError("cannot create sequence directory: " + dir);

  std::ofstream rgb_txt(dir + "/rgb.txt", std::ios::trunc);
  std::ofstream depth_txt(dir + "/depth.txt", std::ios::trunc);
  if (!rgb_txt || !depth_txt) throw IoError("cannot write index files in " + dir);
  rgb_txt << "# color images\n# timestamp filename\n";
  depth_txt << "# depth maps\n# timestamp filename\n";

  Trajectory gt;
  char name[64];
  for (const auto& frame : seq.frames) {
    std::snprintf(name, sizeof(name), "%.6f.png", frame.timestamp);
    write_gray_as_rgb_png(dir + "/rgb/" + name, frame.gray);
    write_depth_png(dir + "/depth/" + name, frame.depth, seq.intrinsics.depth_scale);
    char ts[32];
    std::snprintf(ts, sizeof(ts), "%.6f", frame.timestamp);
    rgb_txt << ts << " rgb/" << name << "\n";
    depth_txt << ts << " depth/" << name << "\n";
    if (frame.gt_pose) gt.entries.push_back({frame.timestamp, *frame.gt_pose, false});
  }
  rgb_txt.flush();
  depth_txt.flush();
  if (!rgb_txt || !depth_txt) throw IoError("write failed in " + dir);
  if (!gt.entries.empty()) write_trajectory(dir + "/groundtruth.txt", gt);
}

double trajectory_length(const Trajectory& traj) {
  double total = 0.0;
  for (std::size_t i = 1; i < traj.entries.size(); ++i)
    total += (traj.entries[i].pose.translation() - traj.entries[i - 1].pose.translation())
                 .norm();
  return total;
}

}  // namespace binofeat
