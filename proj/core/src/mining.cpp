#include "binofeat/mining.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "binofeat/errors.hpp"

namespace binofeat {

std::optional<int> mine_negative(const BinaryDescriptor& anchor,
                                 const std::vector<BinaryDescriptor>& candidates,
                                 const std::vector<PixelCoord>& positions,
                                 const PixelCoord& true_match,
                                 const MiningConfig& cfg) {
  if (candidates.empty()) throw ShapeError("mine_negative: empty candidate set");
  if (candidates.size() != positions.size())
    throw ShapeError("mine_negative: candidate/position count mismatch");
  if (cfg.k < 1 || cfg.u_c < 0 || cfg.v_c < 0)
    throw ShapeError("mine_negative: invalid config");

  std::vector<int> dist(candidates.size());
  for (std::size_t j = 0; j < candidates.size(); ++j)
    dist[j] = hamming(anchor, candidates[j]);

  std::vector<int> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(cfg.k),
                                              candidates.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                    order.end(), [&dist](int a, int b) {
                      return dist[a] != dist[b] ? dist[a] < dist[b] : a < b;
                    });

  for (std::size_t n = 0; n < k; ++n) {
    const int j = order[n];
    const PixelCoord& p = positions[static_cast<std::size_t>(j)];
    if (std::abs(p.u - true_match.u) > cfg.u_c || std::abs(p.v - true_match.v) > cfg.v_c)
      return j;
  }
  return std::nullopt;
}

}  // namespace binofeat
