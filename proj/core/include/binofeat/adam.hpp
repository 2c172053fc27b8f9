#pragma once

#include <vector>

#include "binofeat/autodiff.hpp"
#include "binofeat/tensor.hpp"

namespace binofeat {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Standard Adam with bias correction. One (m, v) pair per parameter tensor.
// step() validates every gradient before mutating any state, so a non-finite
// gradient aborts the update with parameters untouched.
class Adam {
 public:
  Adam(std::vector<NodePtr> params, const AdamConfig& config);

  void step();
  void zero_grad();
  void set_lr(double lr) { config_.lr = lr; }
  double lr() const { return config_.lr; }
  std::int64_t step_count() const { return step_count_; }
  const std::vector<NodePtr>& params() const { return params_; }

 private:
  std::vector<NodePtr> params_;
  AdamConfig config_;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
  std::int64_t step_count_ = 0;
};

}  // namespace binofeat
