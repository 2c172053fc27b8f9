#pragma once

#include <memory>

#include "binofeat/brief.hpp"
#include "binofeat/feature_net.hpp"
#include "binofeat/matcher.hpp"

namespace binofeat {

// Detector + descriptor provider for tracking and benchmarks.
class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;
  virtual FrameFeatures extract(const ImageF32& gray) const = 0;
};

// Learned pipeline: network forward pass, grid NMS on the probability map,
// descriptors sampled from the coarse feature map and binarized.
class GcnExtractor : public FeatureExtractor {
 public:
  GcnExtractor(std::shared_ptr<const FeatureNet> net, const DetectionConfig& detection)
      : net_(std::move(net)), detection_(detection) {}

  FrameFeatures extract(const ImageF32& gray) const override;

 private:
  std::shared_ptr<const FeatureNet> net_;
  DetectionConfig detection_;
};

struct ClassicalConfig {
  DetectionConfig detection;
  double response_scale = 1e-4;  // c0 in the confidence mapping r / (r + c0)
  std::uint32_t pattern_seed = 0x5EEDu;
};

// Handcrafted pipeline: Shi-Tomasi responses squashed to (0,1) confidences
// via r / (r + c0) (monotone, so NMS picks the same pixels), described with
// the smoothed-comparison baseline. Keypoints whose 32x32 patch leaves the
// image are dropped.
class ClassicalExtractor : public FeatureExtractor {
 public:
  explicit ClassicalExtractor(const ClassicalConfig& cfg = {})
      : cfg_(cfg), pattern_(make_brief_pattern(cfg.pattern_seed)) {}

  FrameFeatures extract(const ImageF32& gray) const override;

 private:
  ClassicalConfig cfg_;
  BriefPattern pattern_;
};

// Pairs every keypoint with an independently drawn random descriptor;
// chance-level baseline for precision comparisons. Detection mirrors
// ClassicalExtractor.
class RandomDescriptorExtractor : public FeatureExtractor {
 public:
  RandomDescriptorExtractor(const ClassicalConfig& cfg, std::uint32_t seed)
      : inner_(cfg), seed_(seed) {}

  FrameFeatures extract(const ImageF32& gray) const override;

 private:
  ClassicalExtractor inner_;
  std::uint32_t seed_;
};

}  // namespace binofeat
