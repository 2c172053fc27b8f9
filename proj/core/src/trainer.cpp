#include "binofeat/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "binofeat/adam.hpp"
#include "binofeat/correspondence.hpp"
#include "binofeat/errors.hpp"
#include "binofeat/log.hpp"
#include "binofeat/losses.hpp"

namespace binofeat {

void TrainConfig::validate() const {
  if (margin <= 0 || w_metric <= 0 || w_mask <= 0 || alpha1 <= 0 || alpha2 <= 0)
    throw NumericError("train config: weights and margin must be positive");
  if (base_lr < 0 || epochs < 1 || lr_halving_period < 1)
    throw NumericError("train config: invalid schedule");
  if (mining.k < 1 || mining.u_c < 0 || mining.v_c < 0)
    throw NumericError("train config: invalid mining parameters");
}

double lr_at(int epoch, const TrainConfig& cfg) {
  if (epoch < 0) throw NumericError("lr_at: negative epoch");
  return cfg.base_lr * std::pow(2.0, -static_cast<double>(epoch / cfg.lr_halving_period));
}

namespace {

// Per-pair supervision, computed once: detection masks plus the union of
// target anchors and grid-sampled correspondences.
struct PairData {
  DetectionTarget target;
  std::vector<PixelCoord> anchors_a;
  std::vector<PixelCoord> anchors_b;  // warped positions, full precision
};

PairData prepare_pair(const FramePair& pair, const TrainConfig& cfg) {
  if (!pair.a.gt_pose || !pair.b.gt_pose)
    throw UnsupervisedPairError("train: frame pair without ground-truth poses");
  const Se3Pose t_ba = relative_pose_from_gt(*pair.a.gt_pose, *pair.b.gt_pose);

  PairData data;
  data.target = make_targets(pair.a.gray, pair.a.depth, pair.b.depth, pair.intrinsics,
                             t_ba, cfg.targets);

  std::set<std::pair<double, double>> seen;
  auto push = [&](const PixelCoord& xa, const PixelCoord& xb) {
    if (seen.insert({xa.u, xa.v}).second) {
      data.anchors_a.push_back(xa);
      data.anchors_b.push_back(xb);
    }
  };
  for (const auto& [xa, xb] : data.target.anchors) push(xa, xb);

  // Extra anchors on a regular grid, one per 16x16 cell.
  std::vector<PixelCoord> grid;
  for (int y = kCellSize / 2; y < pair.a.gray.height(); y += kCellSize)
    for (int x = kCellSize / 2; x < pair.a.gray.width(); x += kCellSize)
      grid.push_back({static_cast<double>(x), static_cast<double>(y)});
  CorrespondenceConfig ccfg;
  ccfg.occlusion_tol = cfg.occlusion_tol;
  const CorrespondenceSet corr =
      make_correspondences(pair.a, pair.b, grid, pair.intrinsics, ccfg);
  for (const auto& [xa, xb] : corr.pairs) push(xa, xb);
  return data;
}

std::vector<GridPoint> to_grid(const std::vector<PixelCoord>& px) {
  std::vector<GridPoint> out;
  out.reserve(px.size());
  for (const auto& p : px) out.push_back(feature_grid_coord(p));
  return out;
}

}  // namespace

TrainResult train(FeatureNet& net, const std::vector<FramePair>& pairs,
                  const TrainConfig& cfg) {
  cfg.validate();
  if (pairs.empty()) throw EmptyBatchError("train: no training pairs");

  std::vector<PairData> prepared;
  prepared.reserve(pairs.size());
  for (const auto& pair : pairs) prepared.push_back(prepare_pair(pair, cfg));

  AdamConfig acfg;
  acfg.lr = cfg.base_lr;
  Adam opt(net.parameters(), acfg);

  TrainResult result;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = lr_at(epoch, cfg);
    opt.set_lr(lr);
    EpochStats stats;
    stats.epoch = epoch;
    stats.lr = lr;

    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
      const FramePair& pair = pairs[pi];
      const PairData& data = prepared[pi];
      if (data.anchors_a.empty()) {
        log_warn("epoch " + std::to_string(epoch) + " pair " + std::to_string(pi) +
                 ": no anchors, skipping");
        continue;
      }

      DenseOutputs out_a = net.forward(pair.a.gray);
      DenseOutputs out_b = net.forward(pair.b.gray);
      NodePtr feat_a = bilinear_gather(out_a.features, to_grid(data.anchors_a));
      NodePtr feat_b = bilinear_gather(out_b.features, to_grid(data.anchors_b));

      // Mining runs on binarized snapshots of the current features; the loss
      // recomputes distances through the graph.
      const int n = static_cast<int>(data.anchors_a.size());
      std::vector<BinaryDescriptor> desc_a(static_cast<std::size_t>(n));
      std::vector<BinaryDescriptor> desc_b(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        desc_a[static_cast<std::size_t>(i)] = binarize(&feat_a->value.at(i, 0), 256);
        desc_b[static_cast<std::size_t>(i)] = binarize(&feat_b->value.at(i, 0), 256);
      }

      std::vector<TripletSample> triplets;
      for (int i = 0; i < n; ++i) {
        const auto neg = mine_negative(desc_a[static_cast<std::size_t>(i)], desc_b,
                                       data.anchors_b, data.anchors_b[static_cast<std::size_t>(i)],
                                       cfg.mining);
        if (!neg) continue;
        triplets.push_back({row_select(feat_a, {i}), row_select(feat_b, {i}),
                            row_select(feat_b, {*neg})});
      }
      if (triplets.empty()) {
        log_warn("epoch " + std::to_string(epoch) + " pair " + std::to_string(pi) +
                 ": no mined triplets, skipping");
        continue;
      }

      NodePtr metric = triplet_loss(triplets, cfg.margin);
      NodePtr mask = detection_loss(out_a.prob_map, out_b.prob_map, data.target,
                                    cfg.alpha1, cfg.alpha2);
      NodePtr total = add(scale(metric, cfg.w_metric), scale(mask, cfg.w_mask));

      stats.metric_loss += metric->value[0];
      stats.mask_loss += mask->value[0];
      stats.total += total->value[0];

      opt.zero_grad();
      backward(total);
      opt.step();
    }

    result.log.push_back(stats);
    log_info("epoch " + std::to_string(epoch) + " lr " + std::to_string(lr) +
             " total " + std::to_string(stats.total));
  }
  return result;
}

void write_loss_csv(const std::string& path, const std::vector<EpochStats>& log) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot write loss log: " + path);
  os << "epoch,lr,metric_loss,mask_loss,total\n";
  char line[256];
  for (const auto& s : log) {
    std::snprintf(line, sizeof(line), "%d,%.9e,%.9e,%.9e,%.9e\n", s.epoch, s.lr,
                  s.metric_loss, s.mask_loss, s.total);
    os << line;
  }
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace binofeat
