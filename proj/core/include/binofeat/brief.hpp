#pragma once

#include <array>
#include <cstdint>

#include "binofeat/binary_descriptor.hpp"
#include "binofeat/detection.hpp"
#include "binofeat/image.hpp"

namespace binofeat {

// 256 point-pair offsets inside a 32x32 patch. Offsets are limited to
// [-13, 13] so the 5x5 smoothing window of every sample stays inside the
// patch.
struct BriefPattern {
  struct PointPair {
    std::int8_t px, py, qx, qy;
  };
  std::array<PointPair, 256> pairs;
};

BriefPattern make_brief_pattern(std::uint32_t seed = 0x5EEDu);

// Smoothed intensity comparisons at a keypoint: bit i = [I(p_i) < I(q_i)]
// with I the 5x5 box mean around the offset position. The keypoint must have
// a full 32x32 patch inside the image (throws BoundsError otherwise).
// Comparisons are invariant to additive brightness shifts.
BinaryDescriptor brief_baseline(const ImageF32& gray, const Keypoint& kp,
                                const BriefPattern& pattern);

}  // namespace binofeat
