#include "binofeat/binary_descriptor.hpp"

#include <bit>

#include "binofeat/errors.hpp"

namespace binofeat {

BinaryDescriptor binarize(const float* features, int n) {
  if (n != 256) throw ShapeError("binarize: want 256 features, got " + std::to_string(n));
  BinaryDescriptor d;
  for (int i = 0; i < n; ++i)
    if (features[i] >= 0.f) d.set(i);
  return d;
}

BinaryDescriptor binarize(const Tensor& features) {
  if (features.numel() != 256)
    throw ShapeError("binarize: want 256 features, got " + features.shape_str());
  return binarize(features.data(), 256);
}

int hamming(const BinaryDescriptor& a, const BinaryDescriptor& b) {
  int d = 0;
  for (int w = 0; w < 4; ++w) d += std::popcount(a.bits[w] ^ b.bits[w]);
  return d;
}

std::array<float, 256> to_unit_sphere(const BinaryDescriptor& d) {
  std::array<float, 256> v;
  for (int i = 0; i < 256; ++i) v[i] = d.get(i) ? (1.f / 16.f) : (-1.f / 16.f);
  return v;
}

}  // namespace binofeat
