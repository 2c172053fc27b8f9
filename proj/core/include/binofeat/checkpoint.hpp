#pragma once

#include <string>
#include <utility>
#include <vector>

#include "binofeat/tensor.hpp"

namespace binofeat {

// Named tensors in file order. Order is preserved on round-trip so checkpoints
// written from the same state are byte-identical.
using NamedTensors = std::vector<std::pair<std::string, Tensor>>;

// Binary container: magic "BNFT", u32 version, u32 tensor count, then per
// tensor u32 name length + name bytes + u32 ndim + u32 dims + f32 data.
// All integers and floats little-endian.
void save_checkpoint(const std::string& path, const NamedTensors& tensors);
NamedTensors load_checkpoint(const std::string& path);

// Copies values from `loaded` into same-named destination tensors; every name
// must resolve and shapes must match.
void assign_tensors(const NamedTensors& loaded,
                    const std::vector<std::pair<std::string, Tensor*>>& dst);

}  // namespace binofeat
