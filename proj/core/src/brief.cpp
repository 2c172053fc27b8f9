#include "binofeat/brief.hpp"

#include <cmath>
#include <random>

#include "binofeat/errors.hpp"
#include "binofeat/rng.hpp"

namespace binofeat {

BriefPattern make_brief_pattern(std::uint32_t seed) {
  std::mt19937 rng(seed);
  BriefPattern pattern;
  for (auto& pp : pattern.pairs) {
    pp.px = static_cast<std::int8_t>(uniform_int(rng, -13, 13));
    pp.py = static_cast<std::int8_t>(uniform_int(rng, -13, 13));
    pp.qx = static_cast<std::int8_t>(uniform_int(rng, -13, 13));
    pp.qy = static_cast<std::int8_t>(uniform_int(rng, -13, 13));
  }
  return pattern;
}

BinaryDescriptor brief_baseline(const ImageF32& gray, const Keypoint& kp,
                                const BriefPattern& pattern) {
  const int cx = static_cast<int>(std::lround(kp.pixel.u));
  const int cy = static_cast<int>(std::lround(kp.pixel.v));
  if (cx < 15 || cy < 15 || cx + 16 >= gray.width() || cy + 16 >= gray.height())
    throw BoundsError("brief: 32x32 patch at (" + std::to_string(cx) + "," +
                      std::to_string(cy) + ") leaves the image");

  BinaryDescriptor d;
  for (int i = 0; i < 256; ++i) {
    const auto& pp = pattern.pairs[static_cast<std::size_t>(i)];
    const float ip = box_mean(gray, cx + pp.px, cy + pp.py, 2);
    const float iq = box_mean(gray, cx + pp.qx, cy + pp.qy, 2);
    if (ip < iq) d.set(i);
  }
  return d;
}

}  // namespace binofeat
