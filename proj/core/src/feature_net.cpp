#include "binofeat/feature_net.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "binofeat/errors.hpp"
#include "binofeat/rng.hpp"

namespace binofeat {

namespace {

NodePtr kaiming_conv(std::mt19937& rng, int cout, int cin, int kh, int kw) {
  const int fan_in = cin * kh * kw;
  const float bound = std::sqrt(6.f / static_cast<float>(fan_in));
  Tensor w({cout, cin, kh, kw});
  for (std::int64_t i = 0; i < w.numel(); ++i) w[i] = uniform_float(rng, -bound, bound);
  return make_parameter(std::move(w));
}

}  // namespace

FeatureNet::FeatureNet(const NetConfig& config) : config_(config) {
  const std::array<int, 4> channels =
      config.tiny ? std::array<int, 4>{32, 32, 64, 128} : std::array<int, 4>{32, 64, 128, 256};
  std::mt19937 rng(config.seed);
  int cin = 1;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    ConvParams p;
    p.name = "stage" + std::to_string(i);
    p.weight = kaiming_conv(rng, channels[i], cin, 4, 4);
    p.bias = make_parameter(Tensor::zeros({channels[i]}));
    p.stride = 2;
    p.padding = 1;
    stages_.push_back(std::move(p));
    cin = channels[i];
  }
  detector_ = {"detector", kaiming_conv(rng, kCellSize * kCellSize, cin, 1, 1),
               make_parameter(Tensor::zeros({kCellSize * kCellSize})), 1, 0};
  descriptor_ = {"descriptor", kaiming_conv(rng, kDescriptorDim, cin, 1, 1),
                 make_parameter(Tensor::zeros({kDescriptorDim})), 1, 0};
}

DenseOutputs FeatureNet::forward(const ImageF32& gray) const {
  const int w = gray.width(), h = gray.height();
  if (w <= 0 || h <= 0 || w % kCellSize != 0 || h % kCellSize != 0)
    throw ShapeError("forward: input " + std::to_string(w) + "x" + std::to_string(h) +
                     " must be a positive multiple of " + std::to_string(kCellSize));

  Tensor in({1, h, w});
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) in.at(0, y, x) = gray.at(x, y) - 0.5f;

  NodePtr x = make_constant(std::move(in));
  for (const auto& s : stages_)
    x = relu(conv2d(x, s.weight, s.bias, s.stride, s.padding));

  DenseOutputs out;
  out.features = conv2d(x, descriptor_.weight, descriptor_.bias, 1, 0);
  out.prob_map =
      sigmoid(pixel_shuffle(conv2d(x, detector_.weight, detector_.bias, 1, 0), kCellSize));
  out.grid_width = w / kCellSize;
  out.grid_height = h / kCellSize;
  return out;
}

std::vector<float> sample_descriptor(const Tensor& feature_map, const Keypoint& kp) {
  if (feature_map.ndim() != 3 || feature_map.dim(0) != kDescriptorDim)
    throw ShapeError("sample_descriptor: want [256,gh,gw], got " + feature_map.shape_str());
  const int gh = feature_map.dim(1), gw = feature_map.dim(2);
  if (kp.pixel.u < 0 || kp.pixel.v < 0 || kp.pixel.u >= gw * kCellSize ||
      kp.pixel.v >= gh * kCellSize)
    throw BoundsError("sample_descriptor: keypoint (" + std::to_string(kp.pixel.u) +
                      "," + std::to_string(kp.pixel.v) + ") outside image");

  const GridPoint g = feature_grid_coord(kp.pixel);
  const double x = std::clamp(g.x, 0.0, static_cast<double>(gw - 1));
  const double y = std::clamp(g.y, 0.0, static_cast<double>(gh - 1));
  const int x0 = std::min(static_cast<int>(std::floor(x)), gw - 1);
  const int y0 = std::min(static_cast<int>(std::floor(y)), gh - 1);
  const int x1 = std::min(x0 + 1, gw - 1);
  const int y1 = std::min(y0 + 1, gh - 1);
  const float fx = static_cast<float>(x - x0), fy = static_cast<float>(y - y0);

  std::vector<float> out(kDescriptorDim);
  for (int c = 0; c < kDescriptorDim; ++c)
    out[static_cast<std::size_t>(c)] =
        (1 - fx) * (1 - fy) * feature_map.at(c, y0, x0) +
        fx * (1 - fy) * feature_map.at(c, y0, x1) +
        (1 - fx) * fy * feature_map.at(c, y1, x0) + fx * fy * feature_map.at(c, y1, x1);
  return out;
}

std::vector<NodePtr> FeatureNet::parameters() const {
  std::vector<NodePtr> out;
  for (const auto& s : stages_) {
    out.push_back(s.weight);
    out.push_back(s.bias);
  }
  out.push_back(detector_.weight);
  out.push_back(detector_.bias);
  out.push_back(descriptor_.weight);
  out.push_back(descriptor_.bias);
  return out;
}

std::int64_t FeatureNet::param_count() const {
  std::int64_t n = 0;
  for (const auto& p : parameters()) n += p->value.numel();
  return n;
}

NamedTensors FeatureNet::state() const {
  NamedTensors out;
  auto push = [&out](const ConvParams& p) {
    out.emplace_back(p.name + ".weight", p.weight->value);
    out.emplace_back(p.name + ".bias", p.bias->value);
  };
  for (const auto& s : stages_) push(s);
  push(detector_);
  push(descriptor_);
  return out;
}

void FeatureNet::load_state(const NamedTensors& tensors) {
  std::vector<std::pair<std::string, Tensor*>> dst;
  auto push = [&dst](const ConvParams& p) {
    dst.emplace_back(p.name + ".weight", &p.weight->value);
    dst.emplace_back(p.name + ".bias", &p.bias->value);
  };
  for (const auto& s : stages_) push(s);
  push(detector_);
  push(descriptor_);
  assign_tensors(tensors, dst);
}

}  // namespace binofeat
