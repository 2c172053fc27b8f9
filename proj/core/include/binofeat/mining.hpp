#pragma once

#include <optional>
#include <vector>

#include "binofeat/binary_descriptor.hpp"
#include "binofeat/geometry.hpp"

namespace binofeat {

struct MiningConfig {
  int k = 8;          // number of nearest candidates to inspect
  double u_c = 4.0;   // relaxed window half-widths around the true match, px
  double v_c = 4.0;
};

// Exhaustive negative mining for one anchor: rank the candidates by Hamming
// distance ascending (ties: lowest index), walk the k nearest in order, and
// return the first whose position differs from the ground-truth match by
// more than the relaxed window in either coordinate (|du| > u_c or
// |dv| > v_c). Returns nullopt when all k nearest sit inside the window —
// a valid "no usable negative" outcome, not an error.
std::optional<int> mine_negative(const BinaryDescriptor& anchor,
                                 const std::vector<BinaryDescriptor>& candidates,
                                 const std::vector<PixelCoord>& positions,
                                 const PixelCoord& true_match,
                                 const MiningConfig& cfg = {});

}  // namespace binofeat
