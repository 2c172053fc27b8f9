#include "binofeat/losses.hpp"

#include "binofeat/errors.hpp"

namespace binofeat {

namespace {

// Squared distance between binarized vectors, kept in the graph.
NodePtr binarized_sq_dist(const NodePtr& a, const NodePtr& b) {
  NodePtr diff = sub(sign_ste(a), sign_ste(b));
  return sum(mul(diff, diff));
}

Tensor mask_tensor(const ImageF32& mask, double scale, bool invert) {
  Tensor t({1, mask.height(), mask.width()});
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x) {
      const float c = mask.at(x, y);
      t.at(0, y, x) = static_cast<float>(scale * (invert ? 1.f - c : c));
    }
  return t;
}

// -sum[a1*c*log(o) + a2*(1-c)*log(1-o)]
NodePtr cross_entropy(const NodePtr& o, const ImageF32& mask, double a1, double a2) {
  const Tensor& v = o->value;
  if (v.ndim() != 3 || v.dim(0) != 1 || v.dim(1) != mask.height() ||
      v.dim(2) != mask.width())
    throw ShapeError("detection_loss: map " + v.shape_str() + " vs mask " +
                     std::to_string(mask.width()) + "x" + std::to_string(mask.height()));
  NodePtr pos = mul(make_constant(mask_tensor(mask, a1, false)), log_clamped(o));
  NodePtr neg = mul(make_constant(mask_tensor(mask, a2, true)),
                    log_clamped(add_scalar(scale(o, -1.0), 1.0)));
  return scale(sum(add(pos, neg)), -1.0);
}

}  // namespace

NodePtr triplet_loss(const std::vector<TripletSample>& samples, double margin) {
  if (samples.empty()) throw EmptyBatchError("triplet_loss: empty batch");
  std::vector<NodePtr> terms;
  terms.reserve(samples.size());
  for (const auto& s : samples) {
    NodePtr d_pos = binarized_sq_dist(s.anchor, s.positive);
    NodePtr d_neg = binarized_sq_dist(s.anchor, s.negative);
    terms.push_back(relu(add_scalar(sub(d_pos, d_neg), margin)));
  }
  return terms.size() == 1 ? terms.front() : add_n(terms);
}

NodePtr detection_loss(const NodePtr& o1, const NodePtr& o2,
                       const DetectionTarget& target, double alpha1, double alpha2) {
  return add(cross_entropy(o1, target.mask_a, alpha1, alpha2),
             cross_entropy(o2, target.mask_b, alpha1, alpha2));
}

}  // namespace binofeat
