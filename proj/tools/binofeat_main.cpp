// binofeat - keypoint learning and RGB-D odometry pipeline.
//
// Subcommands: prep | train | extract | track | eval | bench | plot.
// Exit codes: 0 ok, 1 usage, 2 I/O, 3 format, 4 numeric.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "binofeat/checkpoint.hpp"
#include "binofeat/correspondence.hpp"
#include "binofeat/errors.hpp"
#include "binofeat/evaluation.hpp"
#include "binofeat/extractor.hpp"
#include "binofeat/feature_net.hpp"
#include "binofeat/log.hpp"
#include "binofeat/matcher.hpp"
#include "binofeat/plotting.hpp"
#include "binofeat/run_config.hpp"
#include "binofeat/synth.hpp"
#include "binofeat/tracker.hpp"
#include "binofeat/trainer.hpp"
#include "binofeat/tum_dataset.hpp"

namespace {

using namespace binofeat;

// Options shared by the data-consuming subcommands, resolved in this order:
// config file < explicit flags.
struct CommonOpts {
  std::string dataset;
  std::string config_path;
  std::string checkpoint;
  std::string out;
  std::uint32_t seed = 0;
  bool seed_set = false;
  bool tiny = false;
  bool tiny_set = false;
  int max_kp = -1;
  double threshold = -1;
  int synthetic_frames = 0;  // >0: render instead of loading --dataset
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_out) {
  cmd->add_option("--dataset", opts.dataset, "TUM RGB-D sequence directory");
  cmd->add_option("--config", opts.config_path, "JSON run configuration");
  cmd->add_option("--checkpoint", opts.checkpoint, "network checkpoint to load");
  auto* out = cmd->add_option("--out", opts.out, "output path");
  if (needs_out) out->required();
  cmd->add_flag_callback(
      "--tiny", [&opts] { opts.tiny = opts.tiny_set = true; },
      "use the half-width network");
  cmd->add_option_function<std::uint32_t>(
      "--seed",
      [&opts](const std::uint32_t& s) {
        opts.seed = s;
        opts.seed_set = true;
      },
      "seed for every stochastic component");
  cmd->add_option("--max-kp", opts.max_kp, "keypoint budget per frame");
  cmd->add_option("--threshold", opts.threshold, "detection confidence threshold");
  cmd->add_option("--synthetic", opts.synthetic_frames,
                  "render this many synthetic frames instead of loading --dataset");
}

RunConfig resolve_config(const CommonOpts& opts) {
  // --config wins; otherwise a run_config.json stored next to the dataset
  // (written by `prep --make-synthetic`) is picked up automatically.
  std::string path = opts.config_path;
  if (path.empty() && !opts.dataset.empty()) {
    const auto candidate = std::filesystem::path(opts.dataset) / "run_config.json";
    std::error_code ec;
    if (std::filesystem::exists(candidate, ec)) path = candidate.string();
  }
  RunConfig cfg = path.empty() ? RunConfig::defaults() : load_run_config(path);
  if (opts.seed_set) cfg.seed = opts.seed;
  if (opts.tiny_set) cfg.tiny = opts.tiny;
  if (opts.max_kp >= 0) {
    cfg.detection.max_keypoints = opts.max_kp;
    cfg.classical.detection.max_keypoints = opts.max_kp;
  }
  if (opts.threshold >= 0) {
    cfg.detection.threshold = static_cast<float>(opts.threshold);
    cfg.classical.detection.threshold = static_cast<float>(opts.threshold);
  }
  return cfg;
}

LoadedSequence resolve_sequence(const CommonOpts& opts, const RunConfig& cfg) {
  if (opts.synthetic_frames > 0) {
    SequenceSpec spec;
    spec.frames = opts.synthetic_frames;
    SceneConfig scene;
    scene.seed = cfg.seed + 7;
    return make_sequence(320, 240, spec, scene);
  }
  if (opts.dataset.empty())
    throw Error(ErrorCategory::kUsage, "no input: pass --dataset or --synthetic N");
  return load_sequence(opts.dataset, cfg.sequence);
}

std::unique_ptr<FeatureExtractor> make_extractor(const CommonOpts& opts,
                                                 const RunConfig& cfg) {
  if (!opts.checkpoint.empty()) {
    NetConfig ncfg;
    ncfg.tiny = cfg.tiny;
    ncfg.seed = cfg.seed;
    auto net = std::make_shared<FeatureNet>(ncfg);
    net->load_state(load_checkpoint(opts.checkpoint));
    return std::make_unique<GcnExtractor>(std::move(net), cfg.detection);
  }
  log_info("no checkpoint given, using the classical extractor");
  return std::make_unique<ClassicalExtractor>(cfg.classical);
}

std::filesystem::path ensure_out_dir(const std::string& out) {
  std::filesystem::path dir(out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out);
  return dir;
}

// Training pairs: consecutive ground-truth frames of a sequence, or rendered
// synthetic pairs.
std::vector<FramePair> resolve_pairs(const std::string& pairs_source,
                                     const CommonOpts& opts, const RunConfig& cfg,
                                     int pair_count) {
  if (pairs_source == "synthetic" || (pairs_source.empty() && opts.dataset.empty())) {
    SceneConfig scene;
    scene.seed = cfg.seed + 13;
    return make_training_pairs(pair_count, 160, 128, cfg.seed, scene);
  }
  const std::string dir = pairs_source.empty() ? opts.dataset : pairs_source;
  LoadedSequence seq = load_sequence(dir, cfg.sequence);
  std::vector<FramePair> pairs;
  for (std::size_t i = 0; i + 1 < seq.frames.size(); ++i) {
    if (!seq.frames[i].gt_pose || !seq.frames[i + 1].gt_pose) continue;
    FramePair pair;
    pair.a = seq.frames[i];
    pair.b = seq.frames[i + 1];
    pair.intrinsics = seq.intrinsics;
    pairs.push_back(std::move(pair));
    if (static_cast<int>(pairs.size()) >= pair_count) break;
  }
  if (pairs.empty())
    throw UnsupervisedPairError("train: sequence has no consecutive ground-truth pairs");
  return pairs;
}

int cmd_prep(const CommonOpts& opts, int make_synthetic, int synth_w, int synth_h) {
  const RunConfig cfg = resolve_config(opts);
  const auto out_dir = ensure_out_dir(opts.out);

  if (make_synthetic > 0) {
    SequenceSpec spec;
    spec.frames = make_synthetic;
    SceneConfig scene;
    scene.seed = cfg.seed + 7;
    const LoadedSequence seq = make_sequence(synth_w, synth_h, spec, scene);
    write_tum_sequence(opts.out, seq);
    // Record the camera model beside the data so later commands use the
    // renderer's intrinsics instead of the defaults.
    RunConfig synth_cfg = cfg;
    synth_cfg.sequence.intrinsics = seq.intrinsics;
    synth_cfg.sequence.depth_scale = seq.intrinsics.depth_scale;
    synth_cfg.sequence.target_width = 0;
    synth_cfg.sequence.target_height = 0;
    std::ofstream os(out_dir / "run_config.json", std::ios::trunc);
    if (!os) throw IoError("cannot write run_config.json");
    os << run_config_to_json(synth_cfg);
    std::printf("wrote synthetic sequence: %d frames to %s\n", make_synthetic,
                opts.out.c_str());
    return 0;
  }

  const LoadedSequence seq = resolve_sequence(opts, cfg);
  {
    std::ofstream os(out_dir / "associations.csv", std::ios::trunc);
    if (!os) throw IoError("cannot write associations.csv");
    os << "index,timestamp,has_gt\n";
    char line[64];
    for (std::size_t i = 0; i < seq.frames.size(); ++i) {
      std::snprintf(line, sizeof(line), "%zu,%.6f,%d\n", i, seq.frames[i].timestamp,
                    seq.frames[i].gt_pose ? 1 : 0);
      os << line;
    }
  }
  {
    std::ofstream os(out_dir / "correspondences.csv", std::ios::trunc);
    if (!os) throw IoError("cannot write correspondences.csv");
    os << "index_a,index_b,pairs\n";
    std::vector<PixelCoord> grid;
    for (int y = 8; y < seq.intrinsics.height; y += 16)
      for (int x = 8; x < seq.intrinsics.width; x += 16)
        grid.push_back({static_cast<double>(x), static_cast<double>(y)});
    char line[64];
    for (std::size_t i = 0; i + 1 < seq.frames.size(); ++i) {
      if (!seq.frames[i].gt_pose || !seq.frames[i + 1].gt_pose) continue;
      const CorrespondenceSet corr =
          make_correspondences(seq.frames[i], seq.frames[i + 1], grid, seq.intrinsics,
                               {}, static_cast<int>(i), static_cast<int>(i + 1));
      std::snprintf(line, sizeof(line), "%zu,%zu,%zu\n", i, i + 1, corr.pairs.size());
      os << line;
    }
  }
  std::printf("prepared %zu frames into %s\n", seq.frames.size(), opts.out.c_str());
  return 0;
}

int cmd_train(const CommonOpts& opts, const std::string& pairs_source, int epochs,
              int pair_count) {
  RunConfig cfg = resolve_config(opts);
  if (epochs > 0) cfg.train.epochs = epochs;
  const auto out_dir = ensure_out_dir(opts.out);

  const std::vector<FramePair> pairs = resolve_pairs(pairs_source, opts, cfg, pair_count);
  log_info("training on " + std::to_string(pairs.size()) + " pairs");

  NetConfig ncfg;
  ncfg.tiny = cfg.tiny;
  ncfg.seed = cfg.seed;
  FeatureNet net(ncfg);
  if (!opts.checkpoint.empty()) net.load_state(load_checkpoint(opts.checkpoint));

  const TrainResult result = train(net, pairs, cfg.train);
  save_checkpoint((out_dir / "checkpoint.bnft").string(), net.state());
  write_loss_csv((out_dir / "loss.csv").string(), result.log);
  if (!result.log.empty())
    std::printf("trained %d epochs: total loss %.6f -> %.6f\n", cfg.train.epochs,
                result.log.front().total, result.log.back().total);
  return 0;
}

int cmd_extract(const CommonOpts& opts) {
  const RunConfig cfg = resolve_config(opts);
  const LoadedSequence seq = resolve_sequence(opts, cfg);
  const auto extractor = make_extractor(opts, cfg);

  std::vector<FrameFeatures> frames;
  frames.reserve(seq.frames.size());
  std::size_t total = 0;
  for (const auto& frame : seq.frames) {
    frames.push_back(extractor->extract(frame.gray));
    total += frames.back().keypoints.size();
  }
  write_descriptor_dump(opts.out, frames);
  std::printf("extracted %zu keypoints over %zu frames to %s\n", total,
              seq.frames.size(), opts.out.c_str());
  return 0;
}

int cmd_track(const CommonOpts& opts, const std::string& stats_path) {
  RunConfig cfg = resolve_config(opts);
  cfg.track.ransac.seed = cfg.seed;
  const LoadedSequence seq = resolve_sequence(opts, cfg);
  const auto extractor = make_extractor(opts, cfg);

  const TrackResult result =
      track_sequence(seq.frames, seq.intrinsics, *extractor, cfg.track);
  write_trajectory(opts.out, result.trajectory);
  if (!stats_path.empty()) write_stats_csv(stats_path, result.stats);

  const StatsReport report = stats_report(result.stats);
  std::printf("tracked %zu frames (%d lost), mean inlier fraction %.3f -> %s\n",
              seq.frames.size(), report.lost_frames, report.mean_inlier_fraction,
              opts.out.c_str());
  return 0;
}

int cmd_eval(const std::string& est_path, const std::string& gt_path, double max_dt,
             const std::string& out_csv) {
  const Trajectory est = read_trajectory(est_path);
  const Trajectory gt = read_trajectory(gt_path);
  const AteResult result = ate_rmse(est, gt, max_dt);
  std::printf("ate_rmse %.6f m over %zu poses\n", result.rmse_m, result.errors.size());
  if (!out_csv.empty()) {
    std::ofstream os(out_csv, std::ios::trunc);
    if (!os) throw IoError("cannot write " + out_csv);
    os << "timestamp,error_m\n";
    char line[64];
    for (std::size_t i = 0; i < result.errors.size(); ++i) {
      std::snprintf(line, sizeof(line), "%.6f,%.9e\n", result.timestamps[i],
                    result.errors[i]);
      os << line;
    }
  }
  return 0;
}

int cmd_bench(const CommonOpts& opts, const std::string& pairs_source, int pair_count,
              double px_tol_flag) {
  RunConfig cfg = resolve_config(opts);
  const double px_tol = px_tol_flag > 0 ? px_tol_flag : cfg.px_tol;
  const std::vector<FramePair> pairs = resolve_pairs(pairs_source, opts, cfg, pair_count);
  const auto extractor = make_extractor(opts, cfg);

  const BenchmarkResult result = matching_benchmark(pairs, *extractor, px_tol);
  std::printf("precision %.4f density %.4f (correct %lld / evaluated %lld, "
              "matched %lld, keypoints %lld)\n",
              result.precision, result.density,
              static_cast<long long>(result.correct),
              static_cast<long long>(result.evaluated),
              static_cast<long long>(result.matched),
              static_cast<long long>(result.keypoints));
  if (!opts.out.empty()) {
    std::ofstream os(opts.out, std::ios::trunc);
    if (!os) throw IoError("cannot write " + opts.out);
    char line[160];
    std::snprintf(line, sizeof(line), "precision,density,correct,evaluated,matched,keypoints\n"
                  "%.6f,%.6f,%lld,%lld,%lld,%lld\n",
                  result.precision, result.density,
                  static_cast<long long>(result.correct),
                  static_cast<long long>(result.evaluated),
                  static_cast<long long>(result.matched),
                  static_cast<long long>(result.keypoints));
    os << line;
  }
  return 0;
}

std::vector<std::vector<double>> read_csv_columns(const std::string& path,
                                                  std::vector<std::string>& header) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(is, line)) throw FormatError("empty CSV: " + path);
  header.clear();
  std::size_t start = 0;
  while (start <= line.size()) {
    const std::size_t comma = line.find(',', start);
    header.push_back(line.substr(start, comma == std::string::npos ? std::string::npos
                                                                   : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  std::vector<std::vector<double>> cols(header.size());
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::size_t pos = 0;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const std::size_t comma = line.find(',', pos);
      const std::string cell =
          line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      try {
        cols[c].push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw FormatError(path + ":" + std::to_string(line_no) + ": bad number '" +
                          cell + "'");
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  return cols;
}

int cmd_plot(const std::string& loss_csv, const std::string& traj_path,
             const std::string& gt_path, const std::string& stats_csv,
             const std::string& out) {
  if (!loss_csv.empty()) {
    std::vector<std::string> header;
    const auto cols = read_csv_columns(loss_csv, header);
    if (cols.size() < 5 || cols[0].empty())
      throw FormatError("loss CSV needs epoch,lr,metric_loss,mask_loss,total");
    std::vector<PlotSeries> series{
        {"METRIC", cols[0], cols[2], {200, 60, 40}},
        {"MASK", cols[0], cols[3], {40, 140, 60}},
        {"TOTAL", cols[0], cols[4], {30, 90, 200}},
    };
    render_plot(out, "TRAINING LOSS", "EPOCH", "LOSS", series);
  } else if (!traj_path.empty()) {
    const Trajectory est = read_trajectory(traj_path);
    PlotSeries est_series{"EST", {}, {}, {200, 60, 40}};
    for (const auto& e : est.entries) {
      est_series.x.push_back(e.pose.translation().x());
      est_series.y.push_back(e.pose.translation().z());
    }
    std::vector<PlotSeries> series{est_series};
    if (!gt_path.empty()) {
      const Trajectory gt = read_trajectory(gt_path);
      PlotSeries gt_series{"GT", {}, {}, {30, 90, 200}};
      for (const auto& e : gt.entries) {
        gt_series.x.push_back(e.pose.translation().x());
        gt_series.y.push_back(e.pose.translation().z());
      }
      series.push_back(std::move(gt_series));
    }
    render_plot(out, "TRAJECTORY TOP VIEW", "X (M)", "Z (M)", series);
  } else if (!stats_csv.empty()) {
    std::vector<std::string> header;
    const auto cols = read_csv_columns(stats_csv, header);
    if (cols.size() < 4 || cols[0].empty())
      throw FormatError("stats CSV needs timestamp,keypoints,matches,inliers");
    PlotSeries frac{"INLIER FRACTION", {}, {}, {30, 90, 200}};
    const double t0 = cols[0].front();
    for (std::size_t i = 0; i < cols[0].size(); ++i) {
      if (cols[2][i] <= 0) continue;
      frac.x.push_back(cols[0][i] - t0);
      frac.y.push_back(cols[3][i] / cols[2][i]);
    }
    render_plot(out, "LOCAL TRACKING INLIERS", "TIME (S)", "FRACTION", {frac});
  } else {
    throw Error(ErrorCategory::kUsage, "plot: pass one of --loss, --traj, --stats");
  }
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

int exit_code_for(const Error& e) {
  switch (e.category()) {
    case ErrorCategory::kUsage: return 1;
    case ErrorCategory::kIo: return 2;
    case ErrorCategory::kFormat: return 3;
    case ErrorCategory::kNumeric: return 4;
  }
  return 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"binary keypoint learning and RGB-D odometry"};
  app.require_subcommand(1);

  CommonOpts opts;
  int make_synthetic = 0, synth_w = 320, synth_h = 240;
  std::string pairs_source, stats_path, est_path, gt_path;
  std::string loss_csv, traj_path, plot_gt, stats_csv;
  int epochs = 0, pair_count = 20;
  double max_dt = 0.02, px_tol = 0;

  auto* prep = app.add_subcommand("prep", "build association/correspondence caches "
                                          "or write a synthetic sequence");
  add_common(prep, opts, true);
  prep->add_option("--make-synthetic", make_synthetic,
                   "write a rendered TUM-format sequence with this many frames");
  prep->add_option("--width", synth_w, "rendered width");
  prep->add_option("--height", synth_h, "rendered height");

  auto* train_cmd = app.add_subcommand("train", "run the descriptor/detector training loop");
  add_common(train_cmd, opts, true);
  train_cmd->add_option("--pairs", pairs_source,
                        "'synthetic' or a TUM directory (default: --dataset)");
  train_cmd->add_option("--epochs", epochs, "override the epoch count");
  train_cmd->add_option("--pair-count", pair_count, "number of training pairs");

  auto* extract = app.add_subcommand("extract", "dump per-frame keypoints + descriptors");
  add_common(extract, opts, true);

  auto* track = app.add_subcommand("track", "frame-to-keyframe odometry");
  add_common(track, opts, true);
  track->add_option("--stats", stats_path, "per-frame stats CSV path");

  auto* eval = app.add_subcommand("eval", "absolute trajectory error");
  eval->add_option("--est", est_path, "estimated trajectory")->required();
  eval->add_option("--gt", gt_path, "ground-truth trajectory")->required();
  eval->add_option("--max-dt", max_dt, "association window, seconds");
  eval->add_option("--out", opts.out, "per-pose error CSV");

  auto* bench = app.add_subcommand("bench", "matching precision benchmark");
  add_common(bench, opts, false);
  bench->add_option("--pairs", pairs_source, "'synthetic' or a TUM directory");
  bench->add_option("--pair-count", pair_count, "number of benchmark pairs");
  bench->add_option("--px-tol", px_tol, "correctness tolerance, pixels");

  auto* plot = app.add_subcommand("plot", "render loss/trajectory/stats charts");
  plot->add_option("--loss", loss_csv, "loss CSV from train");
  plot->add_option("--traj", traj_path, "trajectory file from track");
  plot->add_option("--gt", plot_gt, "ground-truth trajectory overlay");
  plot->add_option("--stats", stats_csv, "stats CSV from track");
  plot->add_option("--out", opts.out, "output PNG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (prep->parsed()) return cmd_prep(opts, make_synthetic, synth_w, synth_h);
    if (train_cmd->parsed()) return cmd_train(opts, pairs_source, epochs, pair_count);
    if (extract->parsed()) return cmd_extract(opts);
    if (track->parsed()) return cmd_track(opts, stats_path);
    if (eval->parsed()) return cmd_eval(est_path, gt_path, max_dt, opts.out);
    if (bench->parsed()) return cmd_bench(opts, pairs_source, pair_count, px_tol);
    if (plot->parsed()) return cmd_plot(loss_csv, traj_path, plot_gt, stats_csv, opts.out);
  } catch (const Error& e) {
    std::fprintf(stderr, "binofeat: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "binofeat: %s\n", e.what());
    return 4;
  }
  return 1;
}
