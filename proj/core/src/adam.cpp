#include "binofeat/adam.hpp"

#include <cmath>

#include "binofeat/errors.hpp"

namespace binofeat {

Adam::Adam(std::vector<NodePtr> params, const AdamConfig& config)
    : params_(std::move(params)), config_(config) {
  if (params_.empty()) throw ShapeError("adam: no parameters");
  if (config_.lr < 0 || config_.beta1 < 0 || config_.beta1 >= 1 ||
      config_.beta2 < 0 || config_.beta2 >= 1 || config_.eps <= 0)
    throw NumericError("adam: invalid hyperparameters");
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const auto& p : params_) {
    if (!p->requires_grad) throw ShapeError("adam: parameter without requires_grad");
    m_.push_back(Tensor::zeros(p->value.shape()));
    v_.push_back(Tensor::zeros(p->value.shape()));
  }
}

void Adam::step() {
  for (const auto& p : params_)
    if (!p->grad.all_finite())
      throw NumericError(std::string("adam: non-finite gradient for ") + p->op);

  ++step_count_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_count_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_count_));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    Tensor& theta = params_[k]->value;
    const Tensor& g = params_[k]->grad;
    Tensor& m = m_[k];
    Tensor& v = v_[k];
    const std::int64_t n = theta.numel();
    for (std::int64_t i = 0; i < n; ++i) {
      const double gi = g[i];
      const double mi = config_.beta1 * m[i] + (1.0 - config_.beta1) * gi;
      const double vi = config_.beta2 * v[i] + (1.0 - config_.beta2) * gi * gi;
      m[i] = static_cast<float>(mi);
      v[i] = static_cast<float>(vi);
      theta[i] = static_cast<float>(theta[i] -
                                    config_.lr * (mi / bc1) / (std::sqrt(vi / bc2) + config_.eps));
    }
  }
}

void Adam::zero_grad() {
  for (const auto& p : params_) p->zero_grad();
}

}  // namespace binofeat
