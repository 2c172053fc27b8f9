#include "binofeat/matcher.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "binofeat/errors.hpp"

namespace binofeat {

namespace {

// Index of the nearest descriptor in `set` (ties: lowest index), or -1 on an
// empty set. Distance out-param.
int nearest(const BinaryDescriptor& query, const std::vector<BinaryDescriptor>& set,
            int& best_dist) {
  int best = -1;
  best_dist = 257;
  for (std::size_t j = 0; j < set.size(); ++j) {
    const int d = hamming(query, set[j]);
    if (d < best_dist) {
      best_dist = d;
      best = static_cast<int>(j);
    }
  }
  return best;
}

}  // namespace

std::vector<Match> match_nn(const std::vector<BinaryDescriptor>& a,
                            const std::vector<BinaryDescriptor>& b,
                            const MatchConfig& cfg) {
  std::vector<Match> out;
  if (a.empty() || b.empty()) return out;

  std::vector<int> nearest_in_a;
  if (cfg.cross_check) {
    nearest_in_a.resize(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) {
      int d;
      nearest_in_a[j] = nearest(b[j], a, d);
    }
  }

  for (std::size_t i = 0; i < a.size(); ++i) {
    int d;
    const int j = nearest(a[i], b, d);
    if (d > cfg.max_hamming) continue;
    if (cfg.cross_check && nearest_in_a[static_cast<std::size_t>(j)] != static_cast<int>(i))
      continue;
    out.push_back({static_cast<int>(i), j, d});
  }
  return out;
}

namespace {

constexpr char kDumpMagic[4] = {'B', 'N', 'F', 'D'};
constexpr std::uint32_t kDumpVersion = 1;

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), 4);
}

void write_f32(std::ostream& os, float v) {
  os.write(reinterpret_cast<const char*>(&v), 4);
}

std::uint32_t read_u32(std::istream& is, const std::string& path) {
  std::uint32_t v = 0;
  if (!is.read(reinterpret_cast<char*>(&v), 4))
    throw FormatError("descriptor dump truncated: " + path);
  return v;
}

float read_f32(std::istream& is, const std::string& path) {
  float v = 0;
  if (!is.read(reinterpret_cast<char*>(&v), 4))
    throw FormatError("descriptor dump truncated: " + path);
  return v;
}

}  // namespace

void write_descriptor_dump(const std::string& path,
                           const std::vector<FrameFeatures>& frames) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write descriptor dump: " + path);
  os.write(kDumpMagic, 4);
  write_u32(os, kDumpVersion);
  write_u32(os, static_cast<std::uint32_t>(frames.size()));
  for (const auto& f : frames) {
    if (f.keypoints.size() != f.descriptors.size())
      throw ShapeError("descriptor dump: keypoint/descriptor count mismatch");
    write_u32(os, static_cast<std::uint32_t>(f.keypoints.size()));
    for (std::size_t i = 0; i < f.keypoints.size(); ++i) {
      write_f32(os, static_cast<float>(f.keypoints[i].pixel.u));
      write_f32(os, static_cast<float>(f.keypoints[i].pixel.v));
      write_f32(os, f.keypoints[i].confidence);
      os.write(reinterpret_cast<const char*>(f.descriptors[i].bits.data()), 32);
    }
  }
  os.flush();
  if (!os) throw IoError("write failed: " + path);
}

std::vector<FrameFeatures> read_descriptor_dump(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open descriptor dump: " + path);
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kDumpMagic, 4) != 0)
    throw FormatError("not a descriptor dump: " + path);
  const std::uint32_t version = read_u32(is, path);
  if (version != kDumpVersion)
    throw FormatError("unsupported descriptor dump version " + std::to_string(version) +
                      ": " + path);
  const std::uint32_t frame_count = read_u32(is, path);
  std::vector<FrameFeatures> frames;
  frames.reserve(frame_count);
  for (std::uint32_t f = 0; f < frame_count; ++f) {
    const std::uint32_t n = read_u32(is, path);
    FrameFeatures ff;
    ff.keypoints.reserve(n);
    ff.descriptors.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      Keypoint kp;
      kp.pixel.u = read_f32(is, path);
      kp.pixel.v = read_f32(is, path);
      kp.confidence = read_f32(is, path);
      BinaryDescriptor d;
      if (!is.read(reinterpret_cast<char*>(d.bits.data()), 32))
        throw FormatError("descriptor dump truncated: " + path);
      ff.keypoints.push_back(kp);
      ff.descriptors.push_back(d);
    }
    frames.push_back(std::move(ff));
  }
  return frames;
}

}  // namespace binofeat
