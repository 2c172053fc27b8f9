#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "binofeat/errors.hpp"
#include "binofeat/mining.hpp"
#include "binofeat/rng.hpp"
#include "doctest.h"

using namespace binofeat;

namespace {

BinaryDescriptor prefix_descriptor(int n) {
  BinaryDescriptor d;
  for (int i = 0; i < n; ++i) d.set(i);
  return d;
}

BinaryDescriptor random_descriptor(std::mt19937& rng) {
  BinaryDescriptor d;
  for (auto& word : d.bits) {
    word = static_cast<std::uint64_t>(rng()) << 32;
    word |= rng();
  }
  return d;
}

// Literal restatement of the mining contract, written independently: full
// stable sort by (distance, index), then first of the k nearest outside the
// window.
std::optional<int> oracle_mine(const BinaryDescriptor& anchor,
                               const std::vector<BinaryDescriptor>& candidates,
                               const std::vector<PixelCoord>& positions,
                               const PixelCoord& true_match, const MiningConfig& cfg) {
  std::vector<int> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return hamming(anchor, candidates[static_cast<std::size_t>(a)]) <
           hamming(anchor, candidates[static_cast<std::size_t>(b)]);
  });
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(cfg.k),
                                              candidates.size());
  for (std::size_t n = 0; n < k; ++n) {
    const auto& p = positions[static_cast<std::size_t>(order[n])];
    if (std::abs(p.u - true_match.u) > cfg.u_c || std::abs(p.v - true_match.v) > cfg.v_c)
      return order[n];
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("mine_negative returns the nearest candidate outside the window") {
  const BinaryDescriptor anchor = prefix_descriptor(0);
  // Distances: 2, 5, 9. The nearest (index 0) sits inside the window, the
  // second nearest is far enough away in u.
  const std::vector<BinaryDescriptor> cands = {prefix_descriptor(2), prefix_descriptor(5),
                                               prefix_descriptor(9)};
  const std::vector<PixelCoord> pos = {{101.0, 50.0}, {120.0, 50.0}, {200.0, 50.0}};
  const PixelCoord truth{100.0, 50.0};
  const std::optional<int> neg = mine_negative(anchor, cands, pos, truth);
  REQUIRE(neg.has_value());
  CHECK(*neg == 1);
}

TEST_CASE("mine_negative window test is strict: exactly-at-the-edge stays inside") {
  const BinaryDescriptor anchor = prefix_descriptor(0);
  const std::vector<BinaryDescriptor> cands = {prefix_descriptor(2), prefix_descriptor(5)};
  const PixelCoord truth{100.0, 50.0};

  // |du| = 4 with u_c = 4 is inside (not a negative); the second candidate
  // with |dv| = 4.5 is outside.
  std::vector<PixelCoord> pos = {{104.0, 50.0}, {100.0, 54.5}};
  std::optional<int> neg = mine_negative(anchor, cands, pos, truth);
  REQUIRE(neg.has_value());
  CHECK(*neg == 1);

  // Both exactly on the window edge: no negative at all.
  pos = {{104.0, 50.0}, {96.0, 46.0}};
  CHECK_FALSE(mine_negative(anchor, cands, pos, truth).has_value());
}

TEST_CASE("mine_negative returns nullopt when the k nearest all sit inside") {
  const BinaryDescriptor anchor = prefix_descriptor(0);
  std::vector<BinaryDescriptor> cands;
  std::vector<PixelCoord> pos;
  // Indices 0..7 (the k=8 nearest) are clustered at the true match; index 8
  // is far away but too distant in Hamming order to be inspected.
  for (int i = 0; i < 8; ++i) {
    cands.push_back(prefix_descriptor(i + 1));
    pos.push_back({100.0 + 0.25 * i, 50.0});
  }
  cands.push_back(prefix_descriptor(200));
  pos.push_back({400.0, 300.0});
  const PixelCoord truth{100.0, 50.0};
  CHECK_FALSE(mine_negative(anchor, cands, pos, truth).has_value());

  // Widening k to 9 reaches the distant candidate.
  MiningConfig wide;
  wide.k = 9;
  const std::optional<int> neg = mine_negative(anchor, cands, pos, truth, wide);
  REQUIRE(neg.has_value());
  CHECK(*neg == 8);
}

TEST_CASE("mine_negative breaks hamming ties on the lower index") {
  const BinaryDescriptor anchor = prefix_descriptor(0);
  // Both candidates at distance 4; both outside the window. Index 0 must win
  // even though index 1 was pushed "closer" spatially.
  const std::vector<BinaryDescriptor> cands = {prefix_descriptor(4), prefix_descriptor(4)};
  const std::vector<PixelCoord> pos = {{300.0, 50.0}, {200.0, 50.0}};
  const std::optional<int> neg = mine_negative(anchor, cands, pos, {100.0, 50.0});
  REQUIRE(neg.has_value());
  CHECK(*neg == 0);
}

TEST_CASE("mine_negative clamps k to the candidate count") {
  const BinaryDescriptor anchor = prefix_descriptor(0);
  const std::vector<BinaryDescriptor> cands = {prefix_descriptor(30)};
  const std::vector<PixelCoord> pos = {{500.0, 500.0}};
  MiningConfig cfg;
  cfg.k = 8;  // more than available
  const std::optional<int> neg = mine_negative(anchor, cands, pos, {0.0, 0.0}, cfg);
  REQUIRE(neg.has_value());
  CHECK(*neg == 0);
}

TEST_CASE("mine_negative validates inputs") {
  const BinaryDescriptor anchor = prefix_descriptor(0);
  const std::vector<BinaryDescriptor> cands = {prefix_descriptor(1)};
  const std::vector<PixelCoord> pos = {{0.0, 0.0}, {1.0, 1.0}};
  CHECK_THROWS_AS(mine_negative(anchor, {}, {}, {0.0, 0.0}), ShapeError);
  CHECK_THROWS_AS(mine_negative(anchor, cands, pos, {0.0, 0.0}), ShapeError);
  MiningConfig bad;
  bad.k = 0;
  CHECK_THROWS_AS(mine_negative(anchor, cands, {{0.0, 0.0}}, {0.0, 0.0}, bad), ShapeError);
  bad = MiningConfig{};
  bad.u_c = -1.0;
  CHECK_THROWS_AS(mine_negative(anchor, cands, {{0.0, 0.0}}, {0.0, 0.0}, bad), ShapeError);
}

TEST_CASE("mine_negative agrees with the literal oracle on random fixtures") {
  std::mt19937 rng(555);
  int some_negative = 0, some_null = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = uniform_int(rng, 1, 40);
    std::vector<BinaryDescriptor> cands(static_cast<std::size_t>(n));
    std::vector<PixelCoord> pos(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      cands[static_cast<std::size_t>(j)] = random_descriptor(rng);
      // Half the candidates cluster near the true match so nullopt outcomes
      // actually occur.
      if (uniform_int(rng, 0, 1) == 0)
        pos[static_cast<std::size_t>(j)] = {100.0 + uniform_double(rng, -4.0, 4.0),
                                            50.0 + uniform_double(rng, -4.0, 4.0)};
      else
        pos[static_cast<std::size_t>(j)] = {uniform_double(rng, 0.0, 640.0),
                                            uniform_double(rng, 0.0, 480.0)};
    }
    const BinaryDescriptor anchor = random_descriptor(rng);
    const PixelCoord truth{100.0, 50.0};
    MiningConfig cfg;
    cfg.k = uniform_int(rng, 1, 12);
    const std::optional<int> got = mine_negative(anchor, cands, pos, truth, cfg);
    const std::optional<int> want = oracle_mine(anchor, cands, pos, truth, cfg);
    CHECK(got == want);
    if (got.has_value())
      ++some_negative;
    else
      ++some_null;
  }
  // The fixture mix must exercise both outcomes.
  CHECK(some_negative > 50);
  CHECK(some_null > 5);
}
