#pragma once

#include <string>
#include <vector>

#include "binofeat/detection.hpp"
#include "binofeat/feature_net.hpp"
#include "binofeat/mining.hpp"
#include "binofeat/tum_dataset.hpp"

namespace binofeat {

struct TrainConfig {
  double margin = 1.0;
  double w_metric = 100.0;  // weight on the triplet loss
  double w_mask = 1.0;      // weight on the detection cross entropy
  double alpha1 = 0.1;      // positive-pixel weight inside the cross entropy
  double alpha2 = 1.0;      // negative-pixel weight
  double base_lr = 1e-4;
  int epochs = 100;
  int lr_halving_period = 40;  // epochs per halving step
  MiningConfig mining;
  TargetConfig targets;
  double occlusion_tol = 0.05;  // for the extra grid-sampled correspondences

  void validate() const;
};

// base_lr * 2^-floor(epoch / period): three plateau values over the default
// 100-epoch run.
double lr_at(int epoch, const TrainConfig& cfg);

struct EpochStats {
  int epoch = 0;
  double lr = 0;
  double metric_loss = 0;  // unweighted sums over the epoch's pairs
  double mask_loss = 0;
  double total = 0;        // weighted combination actually stepped on
};

struct TrainResult {
  std::vector<EpochStats> log;
};

// One optimization run. Per pair and epoch: forward both frames, sample
// anchor/positive features at the precomputed correspondences, mine negatives
// among the warped in-batch candidates on binarized snapshots, and take one
// ADAM step on w_metric * L_metric + w_mask * L_mask. Pairs that yield no
// triplet in an epoch are skipped with a warning. Anchors come from the
// detection targets plus a regular 16-px grid pushed through the
// ground-truth warp; pairs must carry ground-truth poses.
TrainResult train(FeatureNet& net, const std::vector<FramePair>& pairs,
                  const TrainConfig& cfg);

// "epoch,lr,metric_loss,mask_loss,total" with fixed formatting, so identical
// runs produce byte-identical files.
void write_loss_csv(const std::string& path, const std::vector<EpochStats>& log);

}  // namespace binofeat
