#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "binofeat/errors.hpp"
#include "binofeat/run_config.hpp"
#include "doctest.h"

using namespace binofeat;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string write_config(const std::string& name, const std::string& body) {
  const std::string path = temp_path(name);
  std::ofstream os(path, std::ios::trunc);
  os << body;
  return path;
}

}  // namespace

TEST_CASE("run config defaults carry the locked pipeline parameters") {
  const RunConfig cfg = RunConfig::defaults();
  CHECK(cfg.train.margin == 1.0);
  CHECK(cfg.train.w_metric == 100.0);
  CHECK(cfg.train.w_mask == 1.0);
  CHECK(cfg.train.alpha1 == 0.1);
  CHECK(cfg.train.alpha2 == 1.0);
  CHECK(cfg.train.base_lr == 1e-4);
  CHECK(cfg.train.epochs == 100);
  CHECK(cfg.train.lr_halving_period == 40);
  CHECK(cfg.train.mining.k == 8);
  CHECK(cfg.train.mining.u_c == 4.0);
  CHECK(cfg.train.mining.v_c == 4.0);
  CHECK(cfg.detection.threshold == 0.3f);
  CHECK(cfg.detection.nms_grid == 8);
  CHECK(cfg.detection.max_keypoints == 1000);
  CHECK(cfg.track.ransac.inlier_tol == 0.05);
  CHECK(cfg.track.ransac.min_inliers == 20);
  CHECK(cfg.track.ransac.confidence == 0.999);
  CHECK(cfg.track.ransac.max_iterations == 1000);
  CHECK(cfg.track.match.max_hamming == 64);
  CHECK(cfg.track.match.cross_check);
  CHECK(cfg.track.kf_inlier_floor == 50);
  CHECK(cfg.track.kf_match_floor == 0.3);
  CHECK(cfg.sequence.max_dt == 0.02);
  CHECK(cfg.sequence.depth_scale == 5000.0);
  CHECK(cfg.px_tol == 4.0);
  CHECK_FALSE(cfg.tiny);
}

TEST_CASE("run config JSON round-trips through the strict loader") {
  RunConfig cfg = RunConfig::defaults();
  cfg.tiny = true;
  cfg.seed = 1234;
  cfg.train.epochs = 17;
  cfg.train.mining.k = 5;
  cfg.sequence.intrinsics.fx = 256.0;
  cfg.sequence.target_width = 0;
  cfg.track.ransac.seed = 77;
  cfg.classical.response_scale = 3e-4;
  cfg.px_tol = 2.5;

  const std::string path = write_config("binofeat_cfg_roundtrip.json",
                                        run_config_to_json(cfg));
  const RunConfig loaded = load_run_config(path);
  CHECK(loaded.tiny == cfg.tiny);
  CHECK(loaded.seed == cfg.seed);
  CHECK(loaded.train.epochs == 17);
  CHECK(loaded.train.mining.k == 5);
  CHECK(loaded.sequence.intrinsics.fx == 256.0);
  CHECK(loaded.sequence.target_width == 0);
  CHECK(loaded.track.ransac.seed == 77);
  CHECK(loaded.classical.response_scale == 3e-4);
  CHECK(loaded.px_tol == 2.5);
  // Untouched fields keep their defaults.
  CHECK(loaded.train.margin == 1.0);
  CHECK(loaded.track.ransac.inlier_tol == 0.05);
  std::remove(path.c_str());
}

TEST_CASE("missing keys keep defaults, partial sections merge") {
  const std::string path = write_config(
      "binofeat_cfg_partial.json",
      R"({"train": {"epochs": 3}, "seed": 9})");
  const RunConfig cfg = load_run_config(path);
  CHECK(cfg.train.epochs == 3);
  CHECK(cfg.seed == 9);
  CHECK(cfg.train.margin == 1.0);        // untouched sibling key
  CHECK(cfg.detection.nms_grid == 8);    // untouched section
  CHECK(cfg.sequence.intrinsics.fx == doctest::Approx(535.4));
  std::remove(path.c_str());
}

TEST_CASE("unknown keys are rejected with their path") {
  const std::string path = write_config("binofeat_cfg_unknown.json",
                                        R"({"train": {"learning_rate": 0.1}})");
  try {
    load_run_config(path);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("train.learning_rate") != std::string::npos);
  }
  std::remove(path.c_str());

  const std::string root = write_config("binofeat_cfg_unknown2.json",
                                        R"({"colour_scheme": "dark"})");
  CHECK_THROWS_AS(load_run_config(root), FormatError);
  std::remove(root.c_str());
}

TEST_CASE("type mismatches and broken JSON are format errors") {
  const std::string bad_type = write_config("binofeat_cfg_type.json",
                                            R"({"train": {"epochs": "many"}})");
  CHECK_THROWS_AS(load_run_config(bad_type), FormatError);
  std::remove(bad_type.c_str());

  const std::string syntax = write_config("binofeat_cfg_syntax.json", "{nope");
  CHECK_THROWS_AS(load_run_config(syntax), FormatError);
  std::remove(syntax.c_str());

  CHECK_THROWS_AS(load_run_config(temp_path("binofeat_cfg_missing.json")), IoError);
}

TEST_CASE("depth_scale and occlusion_tol are synchronized on load") {
  const std::string path = write_config(
      "binofeat_cfg_sync.json",
      R"({"dataset": {"depth_scale": 1000.0}, "train": {"occlusion_tol": 0.08}})");
  const RunConfig cfg = load_run_config(path);
  CHECK(cfg.sequence.depth_scale == 1000.0);
  CHECK(cfg.sequence.intrinsics.depth_scale == 1000.0);  // mirrored into intrinsics
  CHECK(cfg.train.targets.occlusion_tol == 0.08);
  CHECK(cfg.train.occlusion_tol == 0.08);  // grid correspondences use the same gate
  std::remove(path.c_str());
}
