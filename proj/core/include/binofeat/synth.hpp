#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "binofeat/geometry.hpp"
#include "binofeat/tum_dataset.hpp"

namespace binofeat {

// Procedural test world: the inside of an axis-aligned textured box
// (x in [-4,4], y in [-2.5,2.5], z in [-1,4] — camera axes, y down,
// z forward). Every view ray from inside hits a wall, so rendered depth is
// dense and analytically exact. Wall textures are seeded multi-octave value
// noise, giving Shi-Tomasi corners at every lattice vertex. The box is wide
// relative to the FOV so that cameras near the origin see only the frontal
// far wall: grazing-angle walls would amplify pixel quantization into large
// range errors.
struct SceneConfig {
  std::uint64_t seed = 7;
  double half_x = 4.0;  // box half-extents / face offsets
  double half_y = 2.5;
  double z_near = -1.0;
  double z_far = 4.0;
};

// fx = fy = 0.8 * width, principal point at the image center.
CameraIntrinsics synth_intrinsics(int width, int height);

// Renders gray + depth for a camera-to-world pose (the pose must keep the
// camera inside the box). The returned frame carries the pose as ground
// truth.
Frame render_frame(const SceneConfig& scene, const CameraIntrinsics& k,
                   const Se3Pose& cam_to_world, double timestamp = 0.0);

// Independent frame pairs with small random relative motion (translation
// 0.05-0.15 m, rotation 1-4 degrees), for descriptor training and matching
// benchmarks. Deterministic in (seed, count, size).
std::vector<FramePair> make_training_pairs(int count, int width, int height,
                                           std::uint32_t seed,
                                           const SceneConfig& scene = {});

struct SequenceSpec {
  int frames = 200;
  double path_length = 1.0;    // meters along a straight sideways track
  double yaw_amplitude = 0.1;  // radians of sinusoidal panning
  double z_base = 2.75;        // camera z; keeps the far wall ~1.2 m away so
                               // wrong-corner matches fall far outside the
                               // RANSAC inlier gate
  double z_bob = 0.12;         // depth modulation, decorrelates optical flow
  double y_bob = 0.05;
  double fps = 30.0;
  double t0 = 1000.0;          // first timestamp
};

// A smooth trajectory through the box with ground-truth poses on every frame.
LoadedSequence make_sequence(int width, int height, const SequenceSpec& spec,
                             const SceneConfig& scene = {});

// Writes a TUM RGB-D directory (rgb/, depth/, rgb.txt, depth.txt,
// groundtruth.txt) that load_sequence can ingest.
void write_tum_sequence(const std::string& dir, const LoadedSequence& seq);

// Sum of consecutive ground-truth position steps.
double trajectory_length(const Trajectory& traj);

}  // namespace binofeat
