#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "binofeat/binary_descriptor.hpp"
#include "binofeat/matcher.hpp"
#include "binofeat/rng.hpp"

namespace {

using namespace binofeat;

std::vector<BinaryDescriptor> random_descriptors(int n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::vector<BinaryDescriptor> out(static_cast<std::size_t>(n));
  for (auto& d : out)
    for (auto& word : d.bits)
      word = (static_cast<std::uint64_t>(rng()) << 32) | rng();
  return out;
}

void BM_Hamming(benchmark::State& state) {
  const auto a = random_descriptors(2, 1);
  std::uint64_t sink = 0;
  for (auto _ : state) sink += hamming(a[0], a[1]);
  benchmark::DoNotOptimize(sink);
}
BENCHMARK(BM_Hamming);

void BM_MatchNn(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = random_descriptors(n, 1);
  const auto b = random_descriptors(n, 2);
  MatchConfig cfg;
  cfg.max_hamming = 256;  // keep every pair so the workload is stable
  for (auto _ : state) {
    auto matches = match_nn(a, b, cfg);
    benchmark::DoNotOptimize(matches);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_MatchNn)->Arg(256)->Arg(1000);

void BM_Binarize(benchmark::State& state) {
  std::mt19937 rng(3);
  std::vector<float> feat(256);
  for (auto& f : feat) f = uniform_float(rng, -1.0f, 1.0f);
  for (auto _ : state) {
    auto d = binarize(feat.data(), feat.size());
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_Binarize);

}  // namespace
