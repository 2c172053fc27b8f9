#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "binofeat/geometry.hpp"
#include "binofeat/image.hpp"

namespace binofeat {

// One RGB-D observation. gray in [0,1], depth in meters (0 = missing),
// gt_pose camera-to-world when ground truth is available.
struct Frame {
  ImageF32 gray;
  ImageF32 depth;
  double timestamp = 0.0;
  std::optional<Se3Pose> gt_pose;
};

// A pair of frames sharing a camera model; the unit of supervision for
// training and the matching benchmark.
struct FramePair {
  Frame a;
  Frame b;
  CameraIntrinsics intrinsics;
};

struct SequenceConfig {
  CameraIntrinsics intrinsics;   // for the native image size
  double depth_scale = 5000.0;   // raw depth units per meter
  double max_dt = 0.02;          // association window, seconds
  int target_width = 0;          // 0 = keep native size; otherwise downscale
  int target_height = 0;
  std::size_t max_frames = 0;    // 0 = no limit
};

struct LoadedSequence {
  std::vector<Frame> frames;         // ordered by RGB timestamp
  CameraIntrinsics intrinsics;       // scaled if the sequence was resized
};

// Greedy timestamp association: candidate pairs within max_dt are taken in
// order of increasing |dt|, each index used at most once. Both input lists
// must be sorted ascending. Returns (index_a, index_b) pairs sorted by
// index_a.
std::vector<std::pair<int, int>> associate(const std::vector<double>& ts_a,
                                           const std::vector<double>& ts_b,
                                           double max_dt);

// Loads a TUM RGB-D directory (rgb.txt, depth.txt, optional groundtruth.txt).
// RGB entries without a depth match within max_dt are dropped; ground-truth
// poses are attached by nearest timestamp within max_dt when available.
// Throws IoError for missing index files, FormatError (with line number) for
// unparseable lines.
LoadedSequence load_sequence(const std::string& dir, const SequenceConfig& cfg);

// TUM trajectory files: "timestamp tx ty tz qx qy qz qw" lines, '#' comments.
struct TrajectoryEntry {
  double timestamp = 0.0;
  Se3Pose pose;         // camera-to-world
  bool lost = false;    // tracking was lost at this frame (pose held)
};

struct Trajectory {
  std::vector<TrajectoryEntry> entries;
};

Trajectory read_trajectory(const std::string& path);
void write_trajectory(const std::string& path, const Trajectory& traj);

// Pose <-> TUM quaternion convention (qx qy qz qw, Hamilton, qw >= 0 on write).
Se3Pose pose_from_tum(double tx, double ty, double tz, double qx, double qy,
                      double qz, double qw);

}  // namespace binofeat
