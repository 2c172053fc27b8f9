#include "binofeat/autodiff.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "binofeat/errors.hpp"

namespace binofeat {

namespace {

using RowMat = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMap = Eigen::Map<RowMat>;
using ConstRowMap = Eigen::Map<const RowMat>;

NodePtr make_node(Tensor value, const char* op, std::vector<NodePtr> parents) {
  auto node = std::make_shared<TensorNode>();
  node->value = std::move(value);
  if (!node->value.all_finite())
    throw NumericError(std::string(op) + ": non-finite output");
  node->grad = Tensor::zeros(node->value.shape());
  node->op = op;
  node->parents = std::move(parents);
  for (const auto& p : node->parents)
    if (p->requires_grad) node->requires_grad = true;
  return node;
}

void check_same_shape(const NodePtr& a, const NodePtr& b, const char* op) {
  if (!a->value.same_shape(b->value))
    throw ShapeError(std::string(op) + ": shape mismatch " + a->value.shape_str() +
                     " vs " + b->value.shape_str());
}

// Elementwise unary helper: forward fn(x), backward dfn(x, y) * upstream.
template <typename Fwd, typename Bwd>
NodePtr unary_op(const NodePtr& x, const char* op, Fwd fwd, Bwd bwd) {
  Tensor out(x->value.shape());
  const std::int64_t n = out.numel();
  for (std::int64_t i = 0; i < n; ++i) out[i] = fwd(x->value[i]);
  NodePtr node = make_node(std::move(out), op, {x});
  if (node->requires_grad) {
    TensorNode* nd = node.get();
    TensorNode* px = x.get();
    node->backward_fn = [nd, px, bwd] {
      const std::int64_t m = nd->value.numel();
      for (std::int64_t i = 0; i < m; ++i)
        px->grad[i] += nd->grad[i] * bwd(px->value[i], nd->value[i]);
    };
  }
  return node;
}

}  // namespace

NodePtr make_constant(Tensor value) {
  auto node = std::make_shared<TensorNode>();
  if (!value.all_finite()) throw NumericError("constant: non-finite input");
  node->grad = Tensor::zeros(value.shape());
  node->value = std::move(value);
  node->requires_grad = false;
  node->op = "constant";
  return node;
}

NodePtr make_parameter(Tensor value) {
  NodePtr node = make_constant(std::move(value));
  node->requires_grad = true;
  node->op = "parameter";
  return node;
}

void backward(const NodePtr& root) {
  if (root->value.numel() != 1)
    throw ShapeError("backward: root must be scalar, got " + root->value.shape_str());

  // Iterative post-order DFS; loss graphs can chain deeply.
  std::vector<TensorNode*> order;
  std::unordered_set<TensorNode*> visited;
  std::vector<std::pair<TensorNode*, std::size_t>> stack;
  stack.emplace_back(root.get(), 0);
  visited.insert(root.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      TensorNode* parent = node->parents[next++].get();
      if (parent->requires_grad && visited.insert(parent).second)
        stack.emplace_back(parent, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  root->grad[0] += 1.f;
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if ((*it)->backward_fn) (*it)->backward_fn();
}

NodePtr conv2d(const NodePtr& input, const NodePtr& weight, const NodePtr& bias,
               int stride, int padding) {
  const Tensor& x = input->value;
  const Tensor& w = weight->value;
  const Tensor& b = bias->value;
  if (x.ndim() != 3 || w.ndim() != 4 || b.ndim() != 1)
    throw ShapeError("conv2d: want input [C,H,W], weight [O,C,kh,kw], bias [O]; got " +
                     x.shape_str() + ", " + w.shape_str() + ", " + b.shape_str());
  const int cin = x.dim(0), h = x.dim(1), wd = x.dim(2);
  const int cout = w.dim(0), kh = w.dim(2), kw = w.dim(3);
  if (w.dim(1) != cin)
    throw ShapeError("conv2d: input channels " + std::to_string(cin) +
                     " vs weight " + w.shape_str());
  if (b.dim(0) != cout)
    throw ShapeError("conv2d: bias " + b.shape_str() + " vs weight " + w.shape_str());
  const int ho = (h + 2 * padding - kh) / stride + 1;
  const int wo = (wd + 2 * padding - kw) / stride + 1;
  if (h + 2 * padding < kh || wd + 2 * padding < kw || ho < 1 || wo < 1)
    throw ShapeError("conv2d: kernel " + w.shape_str() + " does not fit input " +
                     x.shape_str());

  const int k = cin * kh * kw;
  const int m = ho * wo;

  // im2col: col((c*kh+ky)*kw+kx, oy*wo+ox) = x[c, oy*s-p+ky, ox*s-p+kx]
  auto col = std::make_shared<RowMat>(k, m);
  for (int c = 0; c < cin; ++c)
    for (int ky = 0; ky < kh; ++ky)
      for (int kx = 0; kx < kw; ++kx) {
        float* dst = col->data() + static_cast<std::size_t>((c * kh + ky) * kw + kx) * m;
        for (int oy = 0; oy < ho; ++oy) {
          const int iy = oy * stride - padding + ky;
          for (int ox = 0; ox < wo; ++ox) {
            const int ix = ox * stride - padding + kx;
            dst[oy * wo + ox] = (iy >= 0 && iy < h && ix >= 0 && ix < wd)
                                    ? x.at(c, iy, ix)
                                    : 0.f;
          }
        }
      }

  Tensor out({cout, ho, wo});
  {
    ConstRowMap wm(w.data(), cout, k);
    RowMap om(out.data(), cout, m);
    om.noalias() = wm * (*col);
    for (int o = 0; o < cout; ++o) om.row(o).array() += b[o];
  }

  NodePtr node = make_node(std::move(out), "conv2d", {input, weight, bias});
  if (node->requires_grad) {
    TensorNode* nd = node.get();
    TensorNode* pi = input.get();
    TensorNode* pw = weight.get();
    TensorNode* pb = bias.get();
    node->backward_fn = [nd, pi, pw, pb, col, cin, h, wd, cout, kh, kw, ho, wo,
                         stride, padding, k, m] {
      ConstRowMap dout(nd->grad.data(), cout, m);
      if (pw->requires_grad) {
        RowMap dw(pw->grad.data(), cout, k);
        dw.noalias() += dout * col->transpose();
      }
      if (pb->requires_grad)
        for (int o = 0; o < cout; ++o) pb->grad[o] += dout.row(o).sum();
      if (pi->requires_grad) {
        ConstRowMap wm(pw->value.data(), cout, k);
        RowMat dcol = wm.transpose() * dout;  // k x m
        for (int c = 0; c < cin; ++c)
          for (int ky = 0; ky < kh; ++ky)
            for (int kx = 0; kx < kw; ++kx) {
              const float* src =
                  dcol.data() + static_cast<std::size_t>((c * kh + ky) * kw + kx) * m;
              for (int oy = 0; oy < ho; ++oy) {
                const int iy = oy * stride - padding + ky;
                if (iy < 0 || iy >= h) continue;
                for (int ox = 0; ox < wo; ++ox) {
                  const int ix = ox * stride - padding + kx;
                  if (ix >= 0 && ix < wd) pi->grad.at(c, iy, ix) += src[oy * wo + ox];
                }
              }
            }
      }
    };
  }
  return node;
}

NodePtr relu(const NodePtr& x) {
  return unary_op(
      x, "relu", [](float v) { return v > 0.f ? v : 0.f; },
      [](float v, float) { return v > 0.f ? 1.f : 0.f; });
}

// Sigmoid outputs clamped away from {0,1} so downstream logs stay finite and
// the (0,1) range invariant holds even under float saturation.
constexpr float kSigmoidEps = 1e-7f;
constexpr float kLogFloor = 1e-12f;

NodePtr sigmoid(const NodePtr& x) {
  return unary_op(
      x, "sigmoid",
      [](float v) {
        const float y = 1.f / (1.f + std::exp(-v));
        return std::min(1.f - kSigmoidEps, std::max(kSigmoidEps, y));
      },
      [](float, float y) { return y * (1.f - y); });
}

NodePtr log_clamped(const NodePtr& x) {
  return unary_op(
      x, "log", [](float v) { return std::log(std::max(v, kLogFloor)); },
      [](float v, float) { return v > kLogFloor ? 1.f / v : 0.f; });
}

NodePtr sign_ste(const NodePtr& x) {
  return unary_op(
      x, "sign_ste", [](float v) { return v >= 0.f ? 1.f : -1.f; },
      [](float v, float) { return std::abs(v) <= 1.f ? 1.f : 0.f; });
}

NodePtr pixel_shuffle(const NodePtr& x, int r) {
  const Tensor& in = x->value;
  if (in.ndim() != 3)
    throw ShapeError("pixel_shuffle: want [C,H,W], got " + in.shape_str());
  if (r < 1 || in.dim(0) % (r * r) != 0)
    throw ShapeError("pixel_shuffle: channels " + std::to_string(in.dim(0)) +
                     " not divisible by r^2 = " + std::to_string(r * r));
  const int c_out = in.dim(0) / (r * r);
  const int h = in.dim(1), w = in.dim(2);
  Tensor out({c_out, h * r, w * r});
  for (int c = 0; c < c_out; ++c)
    for (int ry = 0; ry < r; ++ry)
      for (int rx = 0; rx < r; ++rx) {
        const int cin = (c * r + ry) * r + rx;
        for (int y = 0; y < h; ++y)
          for (int xx = 0; xx < w; ++xx)
            out.at(c, y * r + ry, xx * r + rx) = in.at(cin, y, xx);
      }
  NodePtr node = make_node(std::move(out), "pixel_shuffle", {x});
  if (node->requires_grad) {
    TensorNode* nd = node.get();
    TensorNode* px = x.get();
    node->backward_fn = [nd, px, r, c_out, h, w] {
      for (int c = 0; c < c_out; ++c)
        for (int ry = 0; ry < r; ++ry)
          for (int rx = 0; rx < r; ++rx) {
            const int cin = (c * r + ry) * r + rx;
            for (int y = 0; y < h; ++y)
              for (int xx = 0; xx < w; ++xx)
                px->grad.at(cin, y, xx) += nd->grad.at(c, y * r + ry, xx * r + rx);
          }
    };
  }
  return node;
}

namespace {

NodePtr binary_op(const NodePtr& a, const NodePtr& b, const char* op,
                  float (*fwd)(float, float),
                  void (*bwd)(TensorNode*, TensorNode*, TensorNode*)) {
  check_same_shape(a, b, op);
  Tensor out(a->value.shape());
  const std::int64_t n = out.numel();
  for (std::int64_t i = 0; i < n; ++i) out[i] = fwd(a->value[i], b->value[i]);
  NodePtr node = make_node(std::move(out), op, {a, b});
  if (node->requires_grad) {
    TensorNode* nd = node.get();
    TensorNode* pa = a.get();
    TensorNode* pb = b.get();
    node->backward_fn = [nd, pa, pb, bwd] { bwd(nd, pa, pb); };
  }
  return node;
}

}  // namespace

NodePtr add(const NodePtr& a, const NodePtr& b) {
  return binary_op(
      a, b, "add", [](float x, float y) { return x + y; },
      [](TensorNode* nd, TensorNode* pa, TensorNode* pb) {
        const std::int64_t n = nd->value.numel();
        if (pa->requires_grad)
          for (std::int64_t i = 0; i < n; ++i) pa->grad[i] += nd->grad[i];
        if (pb->requires_grad)
          for (std::int64_t i = 0; i < n; ++i) pb->grad[i] += nd->grad[i];
      });
}

NodePtr sub(const NodePtr& a, const NodePtr& b) {
  return binary_op(
      a, b, "sub", [](float x, float y) { return x - y; },
      [](TensorNode* nd, TensorNode* pa, TensorNode* pb) {
        const std::int64_t n = nd->value.numel();
        if (pa->requires_grad)
          for (std::int64_t i = 0; i < n; ++i) pa->grad[i] += nd->grad[i];
        if (pb->requires_grad)
          for (std::int64_t i = 0; i < n; ++i) pb->grad[i] -= nd->grad[i];
      });
}

NodePtr mul(const NodePtr& a, const NodePtr& b) {
  return binary_op(
      a, b, "mul", [](float x, float y) { return x * y; },
      [](TensorNode* nd, TensorNode* pa, TensorNode* pb) {
        const std::int64_t n = nd->value.numel();
        if (pa->requires_grad)
          for (std::int64_t i = 0; i < n; ++i) pa->grad[i] += nd->grad[i] * pb->value[i];
        if (pb->requires_grad)
          for (std::int64_t i = 0; i < n; ++i) pb->grad[i] += nd->grad[i] * pa->value[i];
      });
}

NodePtr add_scalar(const NodePtr& a, double s) {
  const float fs = static_cast<float>(s);
  return unary_op(
      a, "add_scalar", [fs](float v) { return v + fs; },
      [](float, float) { return 1.f; });
}

NodePtr scale(const NodePtr& a, double s) {
  const float fs = static_cast<float>(s);
  return unary_op(
      a, "scale", [fs](float v) { return v * fs; },
      [fs](float, float) { return fs; });
}

NodePtr add_n(const std::vector<NodePtr>& xs) {
  if (xs.empty()) throw ShapeError("add_n: empty operand list");
  for (const auto& x : xs) check_same_shape(xs[0], x, "add_n");
  Tensor out(xs[0]->value.shape());
  const std::int64_t n = out.numel();
  for (std::int64_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (const auto& x : xs) acc += x->value[i];
    out[i] = static_cast<float>(acc);
  }
  NodePtr node = make_node(std::move(out), "add_n", xs);
  if (node->requires_grad) {
    TensorNode* nd = node.get();
    std::vector<TensorNode*> raw;
    raw.reserve(xs.size());
    for (const auto& x : xs) raw.push_back(x.get());
    node->backward_fn = [nd, raw = std::move(raw)] {
      const std::int64_t m = nd->value.numel();
      for (TensorNode* p : raw)
        if (p->requires_grad)
          for (std::int64_t i = 0; i < m; ++i) p->grad[i] += nd->grad[i];
    };
  }
  return node;
}

NodePtr sum(const NodePtr& x) {
  double acc = 0.0;
  const std::int64_t n = x->value.numel();
  for (std::int64_t i = 0; i < n; ++i) acc += x->value[i];
  NodePtr node = make_node(Tensor::scalar(static_cast<float>(acc)), "sum", {x});
  if (node->requires_grad) {
    TensorNode* nd = node.get();
    TensorNode* px = x.get();
    node->backward_fn = [nd, px, n] {
      const float g = nd->grad[0];
      for (std::int64_t i = 0; i < n; ++i) px->grad[i] += g;
    };
  }
  return node;
}

NodePtr row_sum(const NodePtr& x) {
  if (x->value.ndim() != 2)
    throw ShapeError("row_sum: want [N,C], got " + x->value.shape_str());
  const int rows = x->value.dim(0), cols = x->value.dim(1);
  Tensor out({rows});
  for (int r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (int c = 0; c < cols; ++c) acc += x->value.at(r, c);
    out[r] = static_cast<float>(acc);
  }
  NodePtr node = make_node(std::move(out), "row_sum", {x});
  if (node->requires_grad) {
    TensorNode* nd = node.get();
    TensorNode* px = x.get();
    node->backward_fn = [nd, px, rows, cols] {
      for (int r = 0; r < rows; ++r) {
        const float g = nd->grad[r];
        for (int c = 0; c < cols; ++c) px->grad.at(r, c) += g;
      }
    };
  }
  return node;
}

NodePtr row_select(const NodePtr& x, std::vector<int> rows) {
  if (x->value.ndim() != 2)
    throw ShapeError("row_select: want [N,C], got " + x->value.shape_str());
  const int n = x->value.dim(0), cols = x->value.dim(1);
  for (int r : rows)
    if (r < 0 || r >= n)
      throw BoundsError("row_select: row " + std::to_string(r) + " out of [0," +
                        std::to_string(n) + ")");
  if (rows.empty()) throw ShapeError("row_select: empty row list");
  Tensor out({static_cast<int>(rows.size()), cols});
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int c = 0; c < cols; ++c)
      out.at(static_cast<int>(i), c) = x->value.at(rows[i], c);
  NodePtr node = make_node(std::move(out), "row_select", {x});
  if (node->requires_grad) {
    TensorNode* nd = node.get();
    TensorNode* px = x.get();
    node->backward_fn = [nd, px, rows = std::move(rows), cols] {
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (int c = 0; c < cols; ++c)
          px->grad.at(rows[i], c) += nd->grad.at(static_cast<int>(i), c);
    };
  }
  return node;
}

namespace {

struct Tap {
  int x0, y0, x1, y1;
  float w00, w10, w01, w11;
};

Tap make_tap(const GridPoint& p, int w, int h) {
  double x = std::clamp(p.x, 0.0, static_cast<double>(w - 1));
  double y = std::clamp(p.y, 0.0, static_cast<double>(h - 1));
  Tap t;
  t.x0 = std::min(static_cast<int>(std::floor(x)), w - 1);
  t.y0 = std::min(static_cast<int>(std::floor(y)), h - 1);
  t.x1 = std::min(t.x0 + 1, w - 1);
  t.y1 = std::min(t.y0 + 1, h - 1);
  const double fx = x - t.x0, fy = y - t.y0;
  t.w00 = static_cast<float>((1 - fx) * (1 - fy));
  t.w10 = static_cast<float>(fx * (1 - fy));
  t.w01 = static_cast<float>((1 - fx) * fy);
  t.w11 = static_cast<float>(fx * fy);
  return t;
}

}  // namespace

NodePtr bilinear_gather(const NodePtr& map, const std::vector<GridPoint>& points) {
  if (map->value.ndim() != 3)
    throw ShapeError("bilinear_gather: want [C,h,w], got " + map->value.shape_str());
  if (points.empty()) throw ShapeError("bilinear_gather: empty point list");
  const int c = map->value.dim(0), h = map->value.dim(1), w = map->value.dim(2);
  std::vector<Tap> taps;
  taps.reserve(points.size());
  for (const auto& p : points) taps.push_back(make_tap(p, w, h));

  Tensor out({static_cast<int>(points.size()), c});
  for (std::size_t i = 0; i < taps.size(); ++i) {
    const Tap& t = taps[i];
    for (int ch = 0; ch < c; ++ch)
      out.at(static_cast<int>(i), ch) =
          t.w00 * map->value.at(ch, t.y0, t.x0) + t.w10 * map->value.at(ch, t.y0, t.x1) +
          t.w01 * map->value.at(ch, t.y1, t.x0) + t.w11 * map->value.at(ch, t.y1, t.x1);
  }
  NodePtr node = make_node(std::move(out), "bilinear_gather", {map});
  if (node->requires_grad) {
    TensorNode* nd = node.get();
    TensorNode* pm = map.get();
    node->backward_fn = [nd, pm, taps = std::move(taps), c] {
      for (std::size_t i = 0; i < taps.size(); ++i) {
        const Tap& t = taps[i];
        for (int ch = 0; ch < c; ++ch) {
          const float g = nd->grad.at(static_cast<int>(i), ch);
          pm->grad.at(ch, t.y0, t.x0) += t.w00 * g;
          pm->grad.at(ch, t.y0, t.x1) += t.w10 * g;
          pm->grad.at(ch, t.y1, t.x0) += t.w01 * g;
          pm->grad.at(ch, t.y1, t.x1) += t.w11 * g;
        }
      }
    };
  }
  return node;
}

}  // namespace binofeat
