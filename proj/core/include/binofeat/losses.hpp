#pragma once

#include <vector>

#include "binofeat/autodiff.hpp"
#include "binofeat/detection.hpp"

namespace binofeat {

// One metric-learning triplet: raw (pre-binarization) feature vectors of the
// anchor in frame 1 and its positive/negative in frame 2, as live graph
// nodes of identical shape.
struct TripletSample {
  NodePtr anchor;
  NodePtr positive;
  NodePtr negative;
};

// Sum over samples of max(0, d+ - d- + margin) where d is the squared
// distance between binarized features, d = sum((sign(a) - sign(b))^2),
// computed through sign_ste so gradients reach the raw features via the
// straight-through rule. d equals 4x the Hamming distance of the packed
// descriptors. Throws EmptyBatchError on an empty batch.
NodePtr triplet_loss(const std::vector<TripletSample>& samples, double margin);

// Weighted two-frame cross entropy against the target masks:
//   L_ce(o, c) = -sum_i [a1 * c_i * log(o_i) + a2 * (1 - c_i) * log(1 - o_i)]
// returned as L_ce(o1, mask_a) + L_ce(o2, mask_b). Log arguments are clamped
// below at 1e-12. Throws ShapeError when maps and masks disagree in shape.
NodePtr detection_loss(const NodePtr& o1, const NodePtr& o2,
                       const DetectionTarget& target, double alpha1, double alpha2);

}  // namespace binofeat
