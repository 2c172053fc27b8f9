#include "binofeat/extractor.hpp"

#include <cstring>
#include <random>

#include "binofeat/errors.hpp"
#include "binofeat/shi_tomasi.hpp"

namespace binofeat {

FrameFeatures GcnExtractor::extract(const ImageF32& gray) const {
  const DenseOutputs out = net_->forward(gray);
  const Tensor& prob = out.prob_map->value;
  ImageF32 conf(gray.width(), gray.height());
  for (int y = 0; y < gray.height(); ++y)
    for (int x = 0; x < gray.width(); ++x) conf.at(x, y) = prob.at(0, y, x);

  FrameFeatures features;
  features.keypoints = extract_keypoints(conf, detection_);
  features.descriptors.reserve(features.keypoints.size());
  for (const auto& kp : features.keypoints) {
    const std::vector<float> f = sample_descriptor(out.features->value, kp);
    features.descriptors.push_back(binarize(f.data(), 256));
  }
  return features;
}

FrameFeatures ClassicalExtractor::extract(const ImageF32& gray) const {
  const ImageF32 response = shi_tomasi_response(gray);
  ImageF32 conf(gray.width(), gray.height());
  const float c0 = static_cast<float>(cfg_.response_scale);
  for (int y = 0; y < gray.height(); ++y)
    for (int x = 0; x < gray.width(); ++x) {
      const float r = response.at(x, y);
      conf.at(x, y) = r / (r + c0);
    }

  FrameFeatures features;
  for (const auto& kp : extract_keypoints(conf, cfg_.detection)) {
    const int cx = static_cast<int>(kp.pixel.u), cy = static_cast<int>(kp.pixel.v);
    if (cx < 15 || cy < 15 || cx + 16 >= gray.width() || cy + 16 >= gray.height())
      continue;  // patch would leave the image
    features.keypoints.push_back(kp);
    features.descriptors.push_back(brief_baseline(gray, kp, pattern_));
  }
  return features;
}

FrameFeatures RandomDescriptorExtractor::extract(const ImageF32& gray) const {
  FrameFeatures features = inner_.extract(gray);

  // Seed from the image content so distinct frames draw distinct descriptor
  // sets (identical sequences on both sides would not be chance-level).
  std::uint64_t hash = 1469598103934665603ull;
  for (float v : gray.data()) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    hash = (hash ^ bits) * 1099511628211ull;
  }
  std::mt19937 rng(static_cast<std::uint32_t>(hash ^ (hash >> 32)) ^ seed_);
  for (auto& d : features.descriptors)
    for (auto& word : d.bits)
      word = (static_cast<std::uint64_t>(rng()) << 32) | rng();
  return features;
}

}  // namespace binofeat
