#include <benchmark/benchmark.h>

#include "binofeat/feature_net.hpp"
#include "binofeat/image.hpp"
#include "binofeat/rng.hpp"

#include <random>

namespace {

using namespace binofeat;

ImageF32 noise_image(int w, int h, std::uint32_t seed) {
  ImageF32 img(w, h);
  std::mt19937 rng(seed);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) img.at(x, y) = uniform_float(rng, 0.0f, 1.0f);
  return img;
}

void BM_ForwardTiny(benchmark::State& state) {
  NetConfig cfg;
  cfg.tiny = true;
  FeatureNet net(cfg);
  const ImageF32 img = noise_image(160, 128, 5);
  for (auto _ : state) {
    auto out = net.forward(img);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_ForwardTiny)->Unit(benchmark::kMillisecond);

void BM_ForwardFull(benchmark::State& state) {
  FeatureNet net({});
  const ImageF32 img = noise_image(320, 240, 5);
  for (auto _ : state) {
    auto out = net.forward(img);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_ForwardFull)->Unit(benchmark::kMillisecond);

}  // namespace
