#pragma once

#include <cstdint>
#include <string>

#include "binofeat/detection.hpp"
#include "binofeat/extractor.hpp"
#include "binofeat/geometry.hpp"
#include "binofeat/tracker.hpp"
#include "binofeat/trainer.hpp"
#include "binofeat/tum_dataset.hpp"

namespace binofeat {

// Everything a pipeline run needs, loadable from a JSON file and overridable
// by CLI flags. Defaults target TUM freiburg3 sequences at 320x240.
struct RunConfig {
  SequenceConfig sequence;      // intrinsics + ingestion parameters
  bool tiny = false;
  std::uint32_t seed = 0;
  TrainConfig train;
  DetectionConfig detection;
  ClassicalConfig classical;
  TrackConfig track;
  double px_tol = 4.0;          // matching benchmark tolerance, pixels

  // TUM freiburg3 intrinsics scaled to the 320x240 working resolution.
  static RunConfig defaults();
};

// Strict JSON loader: unknown keys and type mismatches raise FormatError
// (the documented keys mirror the RunConfig fields). Missing keys keep their
// defaults.
RunConfig load_run_config(const std::string& path);

// Serialization of every documented key, usable as a config template.
std::string run_config_to_json(const RunConfig& cfg);

}  // namespace binofeat
