#pragma once

#include <string>
#include <vector>

#include "binofeat/binary_descriptor.hpp"
#include "binofeat/detection.hpp"

namespace binofeat {

struct Match {
  int index_a = 0;
  int index_b = 0;
  int hamming_distance = 0;
};

struct MatchConfig {
  int max_hamming = 64;  // accept matches at distance <= this (25% of bits)
  bool cross_check = true;
};

// Brute-force nearest neighbor under Hamming distance. For each query in a,
// the closest candidate in b (ties: lowest index) is kept when it passes
// max_hamming; with cross_check only mutual nearest neighbors survive.
// Either side empty yields an empty result.
std::vector<Match> match_nn(const std::vector<BinaryDescriptor>& a,
                            const std::vector<BinaryDescriptor>& b,
                            const MatchConfig& cfg = {});

// Index-aligned keypoints and descriptors for one frame.
struct FrameFeatures {
  std::vector<Keypoint> keypoints;
  std::vector<BinaryDescriptor> descriptors;
};

// Descriptor dump: magic "BNFD", u32 version, u32 frame count; per frame a
// u32 record count followed by (f32 u, f32 v, f32 confidence, 32 descriptor
// bytes) records. Little-endian.
void write_descriptor_dump(const std::string& path,
                           const std::vector<FrameFeatures>& frames);
std::vector<FrameFeatures> read_descriptor_dump(const std::string& path);

}  // namespace binofeat
