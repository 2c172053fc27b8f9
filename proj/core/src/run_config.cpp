#include "binofeat/run_config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>

#include "binofeat/errors.hpp"
#include "json.hpp"

namespace binofeat {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object())
    throw FormatError("config: " + (where.empty() ? std::string("root") : where) +
                      " must be an object");
  for (const auto& [key, value] : j.items())
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&key](const char* a) { return key == a; }))
      throw FormatError("config: unknown key '" + where + key + "'");
}

template <typename T>
void get_opt(const json& j, const std::string& where, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError("config: bad value for '" + where + key + "': " + e.what());
  }
}

void parse_dataset(const json& j, SequenceConfig& cfg) {
  const std::string w = "dataset.";
  check_keys(j, w, {"fx", "fy", "cx", "cy", "width", "height", "depth_scale",
                    "max_dt", "target_width", "target_height", "max_frames"});
  get_opt(j, w, "fx", cfg.intrinsics.fx);
  get_opt(j, w, "fy", cfg.intrinsics.fy);
  get_opt(j, w, "cx", cfg.intrinsics.cx);
  get_opt(j, w, "cy", cfg.intrinsics.cy);
  get_opt(j, w, "width", cfg.intrinsics.width);
  get_opt(j, w, "height", cfg.intrinsics.height);
  get_opt(j, w, "depth_scale", cfg.depth_scale);
  get_opt(j, w, "max_dt", cfg.max_dt);
  get_opt(j, w, "target_width", cfg.target_width);
  get_opt(j, w, "target_height", cfg.target_height);
  get_opt(j, w, "max_frames", cfg.max_frames);
  cfg.intrinsics.depth_scale = cfg.depth_scale;
}

void parse_train(const json& j, TrainConfig& cfg) {
  const std::string w = "train.";
  check_keys(j, w, {"margin", "w_metric", "w_mask", "alpha1", "alpha2", "base_lr",
                    "epochs", "lr_halving_period", "mining_k", "mining_u_c",
                    "mining_v_c", "response_floor", "occlusion_tol"});
  get_opt(j, w, "margin", cfg.margin);
  get_opt(j, w, "w_metric", cfg.w_metric);
  get_opt(j, w, "w_mask", cfg.w_mask);
  get_opt(j, w, "alpha1", cfg.alpha1);
  get_opt(j, w, "alpha2", cfg.alpha2);
  get_opt(j, w, "base_lr", cfg.base_lr);
  get_opt(j, w, "epochs", cfg.epochs);
  get_opt(j, w, "lr_halving_period", cfg.lr_halving_period);
  get_opt(j, w, "mining_k", cfg.mining.k);
  get_opt(j, w, "mining_u_c", cfg.mining.u_c);
  get_opt(j, w, "mining_v_c", cfg.mining.v_c);
  get_opt(j, w, "response_floor", cfg.targets.response_floor);
  get_opt(j, w, "occlusion_tol", cfg.targets.occlusion_tol);
  cfg.occlusion_tol = cfg.targets.occlusion_tol;
}

void parse_detection(const json& j, const std::string& w, DetectionConfig& cfg) {
  check_keys(j, w, {"threshold", "nms_grid", "max_keypoints"});
  get_opt(j, w, "threshold", cfg.threshold);
  get_opt(j, w, "nms_grid", cfg.nms_grid);
  get_opt(j, w, "max_keypoints", cfg.max_keypoints);
}

void parse_classical(const json& j, ClassicalConfig& cfg) {
  const std::string w = "classical.";
  check_keys(j, w, {"threshold", "nms_grid", "max_keypoints", "response_scale",
                    "pattern_seed"});
  get_opt(j, w, "threshold", cfg.detection.threshold);
  get_opt(j, w, "nms_grid", cfg.detection.nms_grid);
  get_opt(j, w, "max_keypoints", cfg.detection.max_keypoints);
  get_opt(j, w, "response_scale", cfg.response_scale);
  get_opt(j, w, "pattern_seed", cfg.pattern_seed);
}

void parse_track(const json& j, TrackConfig& cfg) {
  const std::string w = "track.";
  check_keys(j, w, {"inlier_tol", "min_inliers", "confidence", "max_iterations",
                    "ransac_seed", "max_hamming", "cross_check", "kf_inlier_floor",
                    "kf_match_floor"});
  get_opt(j, w, "inlier_tol", cfg.ransac.inlier_tol);
  get_opt(j, w, "min_inliers", cfg.ransac.min_inliers);
  get_opt(j, w, "confidence", cfg.ransac.confidence);
  get_opt(j, w, "max_iterations", cfg.ransac.max_iterations);
  get_opt(j, w, "ransac_seed", cfg.ransac.seed);
  get_opt(j, w, "max_hamming", cfg.match.max_hamming);
  get_opt(j, w, "cross_check", cfg.match.cross_check);
  get_opt(j, w, "kf_inlier_floor", cfg.kf_inlier_floor);
  get_opt(j, w, "kf_match_floor", cfg.kf_match_floor);
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig cfg;
  // freiburg3 camera at 640x480, scaled to the 320x240 working size by the
  // ingestion path.
  cfg.sequence.intrinsics.fx = 535.4;
  cfg.sequence.intrinsics.fy = 539.2;
  cfg.sequence.intrinsics.cx = 320.1;
  cfg.sequence.intrinsics.cy = 247.6;
  cfg.sequence.intrinsics.width = 640;
  cfg.sequence.intrinsics.height = 480;
  cfg.sequence.target_width = 320;
  cfg.sequence.target_height = 240;
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config: " + path);
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw FormatError("config: " + path + ": " + e.what());
  }

  RunConfig cfg = RunConfig::defaults();
  check_keys(j, "", {"dataset", "train", "detection", "classical", "track", "tiny",
                     "seed", "px_tol"});
  if (j.contains("dataset")) parse_dataset(j.at("dataset"), cfg.sequence);
  if (j.contains("train")) parse_train(j.at("train"), cfg.train);
  if (j.contains("detection"))
    parse_detection(j.at("detection"), "detection.", cfg.detection);
  if (j.contains("classical")) parse_classical(j.at("classical"), cfg.classical);
  if (j.contains("track")) parse_track(j.at("track"), cfg.track);
  get_opt(j, "", "tiny", cfg.tiny);
  get_opt(j, "", "seed", cfg.seed);
  get_opt(j, "", "px_tol", cfg.px_tol);
  return cfg;
}

std::string run_config_to_json(const RunConfig& cfg) {
  json j;
  j["dataset"] = {{"fx", cfg.sequence.intrinsics.fx},
                  {"fy", cfg.sequence.intrinsics.fy},
                  {"cx", cfg.sequence.intrinsics.cx},
                  {"cy", cfg.sequence.intrinsics.cy},
                  {"width", cfg.sequence.intrinsics.width},
                  {"height", cfg.sequence.intrinsics.height},
                  {"depth_scale", cfg.sequence.depth_scale},
                  {"max_dt", cfg.sequence.max_dt},
                  {"target_width", cfg.sequence.target_width},
                  {"target_height", cfg.sequence.target_height},
                  {"max_frames", cfg.sequence.max_frames}};
  j["train"] = {{"margin", cfg.train.margin},
                {"w_metric", cfg.train.w_metric},
                {"w_mask", cfg.train.w_mask},
                {"alpha1", cfg.train.alpha1},
                {"alpha2", cfg.train.alpha2},
                {"base_lr", cfg.train.base_lr},
                {"epochs", cfg.train.epochs},
                {"lr_halving_period", cfg.train.lr_halving_period},
                {"mining_k", cfg.train.mining.k},
                {"mining_u_c", cfg.train.mining.u_c},
                {"mining_v_c", cfg.train.mining.v_c},
                {"response_floor", cfg.train.targets.response_floor},
                {"occlusion_tol", cfg.train.targets.occlusion_tol}};
  j["detection"] = {{"threshold", cfg.detection.threshold},
                    {"nms_grid", cfg.detection.nms_grid},
                    {"max_keypoints", cfg.detection.max_keypoints}};
  j["classical"] = {{"threshold", cfg.classical.detection.threshold},
                    {"nms_grid", cfg.classical.detection.nms_grid},
                    {"max_keypoints", cfg.classical.detection.max_keypoints},
                    {"response_scale", cfg.classical.response_scale},
                    {"pattern_seed", cfg.classical.pattern_seed}};
  j["track"] = {{"inlier_tol", cfg.track.ransac.inlier_tol},
                {"min_inliers", cfg.track.ransac.min_inliers},
                {"confidence", cfg.track.ransac.confidence},
                {"max_iterations", cfg.track.ransac.max_iterations},
                {"ransac_seed", cfg.track.ransac.seed},
                {"max_hamming", cfg.track.match.max_hamming},
                {"cross_check", cfg.track.match.cross_check},
                {"kf_inlier_floor", cfg.track.kf_inlier_floor},
                {"kf_match_floor", cfg.track.kf_match_floor}};
  j["tiny"] = cfg.tiny;
  j["seed"] = cfg.seed;
  j["px_tol"] = cfg.px_tol;
  return j.dump(2) + "\n";
}

}  // namespace binofeat
