#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "humangen/body_model.hpp"
#include "humangen/camera.hpp"
#include "humangen/filter.hpp"
#include "humangen/scene.hpp"

namespace hgen {

/// One generated sample and all of its annotations. Paths are relative to
/// the manifest directory.
struct SampleRecord {
  std::string id;
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  std::string status = "conditions";  // conditions | generated | filtered | failed
  std::optional<std::string> error;

  std::string normal_path;
  std::string mask_path;
  std::string depth_path;
  std::string image_path;

  ShapeParams shape;
  PoseParams pose;
  CameraSample camera;
  Extrinsics extrinsics;
  Points3 joints3d;   // camera space
  Pixels2 keypoints2d;
  std::vector<std::uint8_t> keypoint_visible;

  std::string caption;
  std::vector<std::string> negative;
  std::string gender;
  std::string action;
  std::string environment;
  bool indoor = false;

  std::optional<Placement> placement;
  std::optional<FilterVerdict> verdict;
  double generate_latency_ms = 0;
  double segment_latency_ms = 0;
};

std::string record_to_json_line(const SampleRecord& record);
SampleRecord record_from_json_line(const std::string& line);

struct ManifestHeader {
  std::string format = "humangen-manifest";
  int version = 1;
  std::uint64_t global_seed = 0;
  std::string config_hash;
};

/// Line-delimited manifest: one JSON header line, then one JSON record per
/// line, append-only, flushed per record.
class ManifestWriter {
 public:
  /// Creates (or truncates) the manifest and writes the header.
  ManifestWriter(const std::string& path, const ManifestHeader& header);
  /// Reopens an existing manifest for appending; loads existing ids.
  static ManifestWriter open_append(const std::string& path);

  void append(const SampleRecord& record);
  const std::string& path() const { return path_; }
  std::size_t record_count() const { return ids_.size(); }

 private:
  ManifestWriter() = default;
  std::string path_;
  std::ofstream out_;
  std::unordered_set<std::string> ids_;
};

struct ManifestReadResult {
  ManifestHeader header;
  std::vector<SampleRecord> records;
  std::vector<std::string> issues;  // corrupt lines, with line numbers
};

/// Reads every parseable record; corrupt lines are reported in issues and
/// skipped (a trailing partial line therefore costs at most one record).
ManifestReadResult read_manifest(const std::string& path);

struct ManifestStats {
  std::size_t total = 0;
  std::size_t kept = 0;
  std::size_t dropped = 0;
  std::size_t failed = 0;
  std::size_t pending = 0;
  std::vector<std::size_t> iou_histogram = std::vector<std::size_t>(10, 0);  // [0,0.1) .. [0.9,1]
  std::vector<std::size_t> fov_histogram = std::vector<std::size_t>(10, 0);  // 10 bins over 25..120
  std::map<std::string, std::size_t> environment_counts;
  std::size_t corrupt_lines = 0;
};

ManifestStats stats(const std::string& path);
std::string format_stats(const ManifestStats& s);

/// Deterministic merge: headers must agree, records are ordered by index,
/// duplicate ids rejected.
void merge_manifests(const std::vector<std::string>& inputs, const std::string& output);

/// Integrity check: parseable lines, unique ids, keypoint/joint count
/// equality, and existing files for every kept record. Returns issue
/// strings; empty means the manifest verifies.
std::vector<std::string> verify_manifest(const std::string& path);

/// 16-hex sample id derived from (global_seed, index).
std::string make_sample_id(std::uint64_t global_seed, std::uint64_t index);

/// Relative sharded path, 256 shards by id prefix.
std::string shard_rel_path(const std::string& id, const std::string& suffix);

/// FNV-1a 64 hex digest of canonicalized JSON text (for config hashes).
std::string fnv1a_hex(const std::string& text);

}  // namespace hgen
