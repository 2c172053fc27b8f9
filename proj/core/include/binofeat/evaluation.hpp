#pragma once

#include <vector>

#include "binofeat/extractor.hpp"
#include "binofeat/geometry.hpp"
#include "binofeat/tum_dataset.hpp"

namespace binofeat {

struct AteResult {
  double rmse_m = 0.0;
  std::vector<double> timestamps;  // of the associated pose pairs
  std::vector<double> errors;      // per-pose translational error, meters
  Se3Pose alignment;               // rigid transform applied to the estimate
};

// Absolute trajectory error: associate poses by timestamp, rigidly align the
// estimated positions to ground truth (scale fixed at 1) and take the RMSE
// of the residual translations. Falls back to translation-only (centroid)
// alignment when the point sets are degenerate for rigid_align (fewer than 3
// poses or collinear paths). Throws DegenerateConfigError with fewer than 2
// associated pairs.
AteResult ate_rmse(const Trajectory& est, const Trajectory& gt, double max_dt = 0.02);

struct BenchmarkResult {
  double precision = 0.0;     // correct / evaluated
  double density = 0.0;       // matched / keypoints
  std::int64_t correct = 0;
  std::int64_t evaluated = 0;  // matches whose anchor admits a ground-truth warp
  std::int64_t matched = 0;
  std::int64_t keypoints = 0;  // extracted in the first frames (queries)
};

// Matching quality against projective ground truth: extract and match each
// pair, warp every matched anchor with depth + ground-truth relative pose,
// and count a match correct when the matched keypoint lies within px_tol
// (Euclidean) of the warped anchor. Matches whose anchor lacks valid depth
// or leaves frame B are excluded from the precision denominator. Pairs must
// carry ground-truth poses.
BenchmarkResult matching_benchmark(const std::vector<FramePair>& pairs,
                                   const FeatureExtractor& extractor, double px_tol);

}  // namespace binofeat
