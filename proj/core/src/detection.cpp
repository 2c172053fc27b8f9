#include "binofeat/detection.hpp"

#include <algorithm>
#include <cmath>

#include "binofeat/errors.hpp"
#include "binofeat/feature_net.hpp"
#include "binofeat/shi_tomasi.hpp"

namespace binofeat {

std::vector<Keypoint> extract_keypoints(const ImageF32& confidence,
                                        const DetectionConfig& cfg) {
  if (confidence.empty()) throw ShapeError("extract_keypoints: empty confidence map");
  if (cfg.nms_grid < 1) throw ShapeError("extract_keypoints: nms_grid must be >= 1");
  const int w = confidence.width(), h = confidence.height();
  const int g = cfg.nms_grid;
  const int cells_x = (w + g - 1) / g;
  const int cells_y = (h + g - 1) / g;

  std::vector<Keypoint> kps;
  for (int cy = 0; cy < cells_y; ++cy)
    for (int cx = 0; cx < cells_x; ++cx) {
      int best_x = -1, best_y = -1;
      float best = 0.f;
      const int y_end = std::min((cy + 1) * g, h);
      const int x_end = std::min((cx + 1) * g, w);
      for (int y = cy * g; y < y_end; ++y)
        for (int x = cx * g; x < x_end; ++x) {
          const float v = confidence.at(x, y);
          if (best_x < 0 || v > best) {  // first pixel wins a tie
            best = v;
            best_x = x;
            best_y = y;
          }
        }
      if (best_x >= 0 && best >= cfg.threshold)
        kps.push_back({{static_cast<double>(best_x), static_cast<double>(best_y)},
                       best,
                       0.f,
                       0});
    }

  std::sort(kps.begin(), kps.end(), [](const Keypoint& a, const Keypoint& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.pixel.v != b.pixel.v) return a.pixel.v < b.pixel.v;
    return a.pixel.u < b.pixel.u;
  });
  if (cfg.max_keypoints >= 0 &&
      kps.size() > static_cast<std::size_t>(cfg.max_keypoints))
    kps.resize(static_cast<std::size_t>(cfg.max_keypoints));
  return kps;
}

DetectionTarget make_targets(const ImageF32& gray_a, const ImageF32& depth_a,
                             const ImageF32& depth_b, const CameraIntrinsics& k,
                             const Se3Pose& t_ba, const TargetConfig& cfg) {
  const int w = gray_a.width(), h = gray_a.height();
  if (w == 0 || h == 0) throw ShapeError("make_targets: empty frame");
  if (depth_a.width() != w || depth_a.height() != h)
    throw ShapeError("make_targets: gray/depth size mismatch in frame A");

  const ImageF32 response = shi_tomasi_response(gray_a);
  DetectionTarget target;
  target.mask_a = ImageF32(w, h, 0.f);
  target.mask_b = ImageF32(depth_b.width(), depth_b.height(), 0.f);

  const int cells_x = (w + kCellSize - 1) / kCellSize;
  const int cells_y = (h + kCellSize - 1) / kCellSize;
  for (int cy = 0; cy < cells_y; ++cy)
    for (int cx = 0; cx < cells_x; ++cx) {
      int best_x = -1, best_y = -1;
      float best = 0.f;
      const int y_end = std::min((cy + 1) * kCellSize, h);
      const int x_end = std::min((cx + 1) * kCellSize, w);
      for (int y = cy * kCellSize; y < y_end; ++y)
        for (int x = cx * kCellSize; x < x_end; ++x) {
          const float v = response.at(x, y);
          if (best_x < 0 || v > best) {
            best = v;
            best_x = x;
            best_y = y;
          }
        }
      if (best_x < 0 || best < cfg.response_floor) continue;

      const PixelCoord xi{static_cast<double>(best_x), static_cast<double>(best_y)};
      target.mask_a.at(best_x, best_y) = 1.f;

      const double z = depth_a.at(best_x, best_y);
      if (z <= 0.0 || !std::isfinite(z)) continue;
      const auto warped = warp_correspondence(xi, z, t_ba, k);
      if (!warped) continue;
      const int bx = static_cast<int>(std::lround(warped->pixel.u));
      const int by = static_cast<int>(std::lround(warped->pixel.v));
      if (!target.mask_b.in_bounds(bx, by)) continue;
      const double zb = depth_b.at(bx, by);
      if (zb > 0.0 && std::abs(warped->depth - zb) > cfg.occlusion_tol * warped->depth)
        continue;
      target.mask_b.at(bx, by) = 1.f;
      target.anchors.emplace_back(xi, warped->pixel);
    }
  return target;
}

}  // namespace binofeat
