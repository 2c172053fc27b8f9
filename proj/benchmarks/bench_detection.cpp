#include <benchmark/benchmark.h>

#include "binofeat/detection.hpp"
#include "binofeat/shi_tomasi.hpp"
#include "binofeat/synth.hpp"

namespace {

using namespace binofeat;

ImageF32 textured_image(int w, int h) {
  SceneConfig scene;
  return render_frame(scene, synth_intrinsics(w, h), Se3Pose()).gray;
}

void BM_ShiTomasi(benchmark::State& state) {
  const ImageF32 img = textured_image(320, 240);
  for (auto _ : state) {
    auto resp = shi_tomasi_response(img);
    benchmark::DoNotOptimize(resp);
  }
}
BENCHMARK(BM_ShiTomasi)->Unit(benchmark::kMillisecond);

void BM_ExtractKeypoints(benchmark::State& state) {
  const ImageF32 img = textured_image(320, 240);
  const ImageF32 resp = shi_tomasi_response(img);
  ImageF32 conf(resp.width(), resp.height());
  for (int y = 0; y < resp.height(); ++y)
    for (int x = 0; x < resp.width(); ++x) {
      const float r = resp.at(x, y);
      conf.at(x, y) = r / (r + 1e-4f);
    }
  DetectionConfig cfg;
  for (auto _ : state) {
    auto kps = extract_keypoints(conf, cfg);
    benchmark::DoNotOptimize(kps);
  }
}
BENCHMARK(BM_ExtractKeypoints)->Unit(benchmark::kMillisecond);

}  // namespace
