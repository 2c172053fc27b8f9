#pragma once

#include <array>
#include <cstdint>

#include "binofeat/tensor.hpp"

namespace binofeat {

// 256-bit packed descriptor; bit i is set iff feature i >= 0.
struct BinaryDescriptor {
  std::array<std::uint64_t, 4> bits{};

  bool get(int i) const { return (bits[i >> 6] >> (i & 63)) & 1u; }
  void set(int i) { bits[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool operator==(const BinaryDescriptor&) const = default;
};

// Packs the signs of a 256-float feature vector.
BinaryDescriptor binarize(const float* features, int n = 256);
BinaryDescriptor binarize(const Tensor& features);

int hamming(const BinaryDescriptor& a, const BinaryDescriptor& b);

// +-1/16 per entry: unit-norm vectors whose squared Euclidean distance is
// exactly hamming/64 (antipodal descriptors land 2 apart, squared 4).
std::array<float, 256> to_unit_sphere(const BinaryDescriptor& d);

}  // namespace binofeat
