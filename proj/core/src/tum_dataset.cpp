#include "binofeat/tum_dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "binofeat/errors.hpp"
#include "binofeat/image_io.hpp"
#include "binofeat/log.hpp"

namespace binofeat {

namespace {

struct IndexedFile {
  double timestamp;
  std::string path;
};

// "timestamp filename" lines with '#' comments, TUM index file convention.
std::vector<IndexedFile> read_index_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("missing index file: " + path);
  std::vector<IndexedFile> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    IndexedFile entry;
    if (!(ss >> entry.timestamp >> entry.path))
      throw FormatError(path + ":" + std::to_string(lineno) + ": unparseable line");
    out.push_back(std::move(entry));
  }
  std::sort(out.begin(), out.end(),
            [](const IndexedFile& a, const IndexedFile& b) { return a.timestamp < b.timestamp; });
  return out;
}

struct GtEntry {
  double timestamp;
  Se3Pose pose;
};

std::vector<GtEntry> read_groundtruth(const std::string& path) {
  std::ifstream in(path);
  if (!in) return {};
  std::vector<GtEntry> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    double ts, tx, ty, tz, qx, qy, qz, qw;
    if (!(ss >> ts >> tx >> ty >> tz >> qx >> qy >> qz >> qw))
      throw FormatError(path + ":" + std::to_string(lineno) + ": unparseable line");
    out.push_back({ts, pose_from_tum(tx, ty, tz, qx, qy, qz, qw)});
  }
  std::sort(out.begin(), out.end(),
            [](const GtEntry& a, const GtEntry& b) { return a.timestamp < b.timestamp; });
  return out;
}

// Nearest entry by timestamp in a sorted list, or -1 if outside max_dt.
int nearest_sorted(const std::vector<double>& ts, double query, double max_dt) {
  if (ts.empty()) return -1;
  const auto it = std::lower_bound(ts.begin(), ts.end(), query);
  int best = -1;
  double best_dt = max_dt;
  if (it != ts.end() && std::abs(*it - query) <= best_dt) {
    best = static_cast<int>(it - ts.begin());
    best_dt = std::abs(*it - query);
  }
  if (it != ts.begin() && std::abs(*(it - 1) - query) < best_dt)
    best = static_cast<int>(it - 1 - ts.begin());
  return best;
}

ImageF32 resize_gray(const ImageF32& img, int w, int h) {
  // Native TUM is 640x480 and the pipeline runs at 320x240, so the common
  // case is exact 2x area reduction. Fall back to bilinear otherwise.
  if (img.width() == 2 * w && img.height() == 2 * h) return downsample2(img);
  ImageF32 out(w, h);
  const double sx = static_cast<double>(img.width()) / w;
  const double sy = static_cast<double>(img.height()) / h;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      out.at(x, y) = sample_bilinear(img, (x + 0.5) * sx - 0.5, (y + 0.5) * sy - 0.5);
  return out;
}

ImageF32 resize_depth_nearest(const ImageF32& img, int w, int h) {
  // Nearest neighbor keeps holes (depth 0) honest instead of smearing them.
  ImageF32 out(w, h);
  const double sx = static_cast<double>(img.width()) / w;
  const double sy = static_cast<double>(img.height()) / h;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int src_x = std::min(img.width() - 1,
                                 static_cast<int>(std::lround((x + 0.5) * sx - 0.5)));
      const int src_y = std::min(img.height() - 1,
                                 static_cast<int>(std::lround((y + 0.5) * sy - 0.5)));
      out.at(x, y) = img.at(std::max(0, src_x), std::max(0, src_y));
    }
  return out;
}

}  // namespace

std::vector<std::pair<int, int>> associate(const std::vector<double>& ts_a,
                                           const std::vector<double>& ts_b,
                                           double max_dt) {
  struct Candidate {
    double dt;
    int i, j;
  };
  std::vector<Candidate> candidates;
  std::size_t lo = 0;
  for (std::size_t i = 0; i < ts_a.size(); ++i) {
    while (lo < ts_b.size() && ts_b[lo] < ts_a[i] - max_dt) ++lo;
    for (std::size_t j = lo; j < ts_b.size() && ts_b[j] <= ts_a[i] + max_dt; ++j)
      candidates.push_back({std::abs(ts_a[i] - ts_b[j]), static_cast<int>(i),
                            static_cast<int>(j)});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.dt != b.dt) return a.dt < b.dt;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  std::vector<char> used_a(ts_a.size(), 0), used_b(ts_b.size(), 0);
  std::vector<std::pair<int, int>> pairs;
  for (const auto& c : candidates) {
    if (used_a[c.i] || used_b[c.j]) continue;
    used_a[c.i] = used_b[c.j] = 1;
    pairs.emplace_back(c.i, c.j);
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

LoadedSequence load_sequence(const std::string& dir, const SequenceConfig& cfg) {
  const auto rgb = read_index_file(dir + "/rgb.txt");
  const auto depth = read_index_file(dir + "/depth.txt");
  const auto gt = read_groundtruth(dir + "/groundtruth.txt");

  std::vector<double> rgb_ts(rgb.size()), depth_ts(depth.size());
  for (std::size_t i = 0; i < rgb.size(); ++i) rgb_ts[i] = rgb[i].timestamp;
  for (std::size_t i = 0; i < depth.size(); ++i) depth_ts[i] = depth[i].timestamp;
  const auto pairs = associate(rgb_ts, depth_ts, cfg.max_dt);

  std::vector<double> gt_ts(gt.size());
  for (std::size_t i = 0; i < gt.size(); ++i) gt_ts[i] = gt[i].timestamp;

  const bool resize = cfg.target_width > 0 && cfg.target_height > 0;
  LoadedSequence seq;
  seq.intrinsics = resize ? cfg.intrinsics.scaled(cfg.target_width, cfg.target_height)
                          : cfg.intrinsics;
  seq.intrinsics.depth_scale = cfg.depth_scale;

  for (const auto& [ri, di] : pairs) {
    if (cfg.max_frames > 0 && seq.frames.size() >= cfg.max_frames) break;
    Frame frame;
    frame.timestamp = rgb[ri].timestamp;
    frame.gray = read_image_gray(dir + "/" + rgb[ri].path);
    frame.depth = read_depth(dir + "/" + depth[di].path, cfg.depth_scale);
    if (frame.gray.width() != frame.depth.width() ||
        frame.gray.height() != frame.depth.height())
      throw FormatError("rgb/depth size mismatch at t=" + std::to_string(frame.timestamp));
    if (resize) {
      frame.gray = resize_gray(frame.gray, cfg.target_width, cfg.target_height);
      frame.depth = resize_depth_nearest(frame.depth, cfg.target_width, cfg.target_height);
    }
    const int gi = nearest_sorted(gt_ts, frame.timestamp, cfg.max_dt);
    if (gi >= 0) frame.gt_pose = gt[gi].pose;
    seq.frames.push_back(std::move(frame));
  }
  log_info("loaded " + std::to_string(seq.frames.size()) + " frames from " + dir);
  return seq;
}

Se3Pose pose_from_tum(double tx, double ty, double tz, double qx, double qy,
                      double qz, double qw) {
  Eigen::Quaterniond q(qw, qx, qy, qz);
  const double n = q.norm();
  if (!(n > 0) || !std::isfinite(n))
    throw FormatError("invalid quaternion in trajectory");
  q.normalize();
  return Se3Pose(q.toRotationMatrix(), Eigen::Vector3d(tx, ty, tz));
}

Trajectory read_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("missing trajectory file: " + path);
  Trajectory traj;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    double ts, tx, ty, tz, qx, qy, qz, qw;
    if (!(ss >> ts >> tx >> ty >> tz >> qx >> qy >> qz >> qw))
      throw FormatError(path + ":" + std::to_string(lineno) + ": unparseable line");
    traj.entries.push_back({ts, pose_from_tum(tx, ty, tz, qx, qy, qz, qw), false});
  }
  return traj;
}

void write_trajectory(const std::string& path, const Trajectory& traj) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot write " + path);
  std::fprintf(f, "# timestamp tx ty tz qx qy qz qw\n");
  for (const auto& e : traj.entries) {
    if (e.lost) std::fprintf(f, "# lost %.6f\n", e.timestamp);
    Eigen::Quaterniond q(e.pose.rotation());
    if (q.w() < 0) q.coeffs() *= -1.0;  // deterministic sign
    const auto& t = e.pose.translation();
    std::fprintf(f, "%.6f %.9f %.9f %.9f %.9f %.9f %.9f %.9f\n", e.timestamp,
                 t.x(), t.y(), t.z(), q.x(), q.y(), q.z(), q.w());
  }
  std::fclose(f);
}

}  // namespace binofeat
