#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "binofeat/tensor.hpp"

namespace binofeat {

// Reverse-mode differentiation over Tensor values. A TensorNode records its
// value, an accumulated gradient of the same shape, and how to push
// gradients to its parents. Graphs are built by the free functions below and
// traversed once by backward(); every forward op verifies its output is
// finite and throws NumericError otherwise.
//
// Gradients accumulate (+=) until zeroed, so summing two losses and running
// one backward equals running backward for each.
class TensorNode {
 public:
  Tensor value;
  Tensor grad;  // same shape as value, zero until backward touches it
  bool requires_grad = false;
  const char* op = "leaf";  // provenance tag for debugging and errors

  std::vector<std::shared_ptr<TensorNode>> parents;
  std::function<void()> backward_fn;  // pushes this->grad into parents

  void zero_grad() { grad.fill(0.f); }
};

using NodePtr = std::shared_ptr<TensorNode>;

NodePtr make_constant(Tensor value);
NodePtr make_parameter(Tensor value);

// Runs reverse-mode accumulation from a scalar root (shape [1]).
void backward(const NodePtr& root);

// --- operator set (the closure the feature network needs) ---

// Cross-correlation of input [Cin,H,W] with weight [Cout,Cin,kh,kw] plus
// bias [Cout]; output [Cout,Ho,Wo] with Ho = (H + 2*pad - kh)/stride + 1.
NodePtr conv2d(const NodePtr& input, const NodePtr& weight, const NodePtr& bias,
               int stride, int padding);

NodePtr relu(const NodePtr& x);
NodePtr sigmoid(const NodePtr& x);
// log(max(x, 1e-12)); gradient is zero where the clamp is active.
NodePtr log_clamped(const NodePtr& x);

// Forward: +1 where x >= 0, -1 otherwise. Backward: straight-through,
// passing the upstream gradient where |x| <= 1 and zero elsewhere.
NodePtr sign_ste(const NodePtr& x);

// [C*r*r, H, W] -> [C, H*r, W*r]; channel (c*r + ry)*r + rx feeds output
// pixel (y*r + ry, x*r + rx) of channel c.
NodePtr pixel_shuffle(const NodePtr& x, int r);

NodePtr add(const NodePtr& a, const NodePtr& b);
NodePtr sub(const NodePtr& a, const NodePtr& b);
NodePtr mul(const NodePtr& a, const NodePtr& b);
NodePtr add_scalar(const NodePtr& a, double s);
NodePtr scale(const NodePtr& a, double s);
NodePtr add_n(const std::vector<NodePtr>& xs);  // elementwise n-ary sum

NodePtr sum(const NodePtr& x);      // -> [1]
NodePtr row_sum(const NodePtr& x);  // [N,C] -> [N]

// [N,C] -> [M,C] picking the given rows (repeats allowed).
NodePtr row_select(const NodePtr& x, std::vector<int> rows);

// Continuous position on a [C,h,w] map, in grid units (x = column).
struct GridPoint {
  double x = 0.0;
  double y = 0.0;
};

// Bilinear interpolation of a [C,h,w] map at N positions -> [N,C].
// Positions are clamped to the map; the positions themselves are data, not
// differentiated through.
NodePtr bilinear_gather(const NodePtr& map, const std::vector<GridPoint>& points);

}  // namespace binofeat
