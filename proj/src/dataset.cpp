#include "humangen/dataset.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace hgen {

namespace {

using nlohmann::json;

json points_to_json(const Points3& p) {
  json out = json::array();
  for (Eigen::Index i = 0; i < p.cols(); ++i)
    out.push_back(json::array({p(0, i), p(1, i), p(2, i)}));
  return out;
}

Points3 points_from_json(const json& a) {
  Points3 p(3, static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (int k = 0; k < 3; ++k) p(k, static_cast<Eigen::Index>(i)) = a[i][k].get<double>();
  return p;
}

json vec3_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from_json(const json& a) {
  return Vec3(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
}

json mat3_to_json(const Mat3& m) {
  json out = json::array();
  for (int r = 0; r < 3; ++r) out.push_back(json::array({m(r, 0), m(r, 1), m(r, 2)}));
  return out;
}

Mat3 mat3_from_json(const json& a) {
  Mat3 m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = a[r][c].get<double>();
  return m;
}

json vecxd_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vecxd_from_json(const json& a) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

json header_to_json(const ManifestHeader& h) {
  json doc;
  doc["format"] = h.format;
  doc["version"] = h.version;
  doc["global_seed"] = h.global_seed;
  doc["config_hash"] = h.config_hash;
  return doc;
}

ManifestHeader header_from_json(const json& doc) {
  ManifestHeader h;
  h.format = doc.at("format").get<std::string>();
  h.version = doc.at("version").get<int>();
  h.global_seed = doc.at("global_seed").get<std::uint64_t>();
  h.config_hash = doc.at("config_hash").get<std::string>();
  if (h.format != "humangen-manifest")
    throw std::runtime_error("manifest: unrecognized format " + h.format);
  return h;
}

}  // namespace

std::string record_to_json_line(const SampleRecord& r) {
  json doc;
  doc["id"] = r.id;
  doc["index"] = r.index;
  doc["seed"] = r.seed;
  doc["status"] = r.status;
  if (r.error) doc["error"] = *r.error;

  json paths;
  paths["normal"] = r.normal_path;
  paths["mask"] = r.mask_path;
  paths["depth"] = r.depth_path;
  paths["image"] = r.image_path;
  doc["paths"] = std::move(paths);

  doc["shape"] = {{"betas", vecxd_to_json(r.shape.betas)}, {"psi", vecxd_to_json(r.shape.psi)}};
  doc["pose"] = {{"thetas", points_to_json(r.pose.thetas)},
                 {"root_translation", vec3_to_json(r.pose.root_translation)}};

  json cam;
  cam["s"] = r.camera.s;
  cam["tx"] = r.camera.tx;
  cam["ty"] = r.camera.ty;
  cam["fov_deg"] = r.camera.fov_deg;
  cam["f_ndc"] = r.camera.f_ndc;
  cam["transl"] = vec3_to_json(r.camera.transl);
  cam["width"] = r.camera.width;
  cam["height"] = r.camera.height;
  cam["intrinsics"] = mat3_to_json(intrinsics_matrix(r.camera));
  doc["camera"] = std::move(cam);
  doc["extrinsics"] = {{"rotation", mat3_to_json(r.extrinsics.rotation)},
                       {"position", vec3_to_json(r.extrinsics.position)}};

  doc["joints3d"] = points_to_json(r.joints3d);
  json kp = json::array();
  for (Eigen::Index i = 0; i < r.keypoints2d.cols(); ++i) {
    kp.push_back(json::array(
        {r.keypoints2d(0, i), r.keypoints2d(1, i),
         static_cast<int>(i < static_cast<Eigen::Index>(r.keypoint_visible.size())
                              ? r.keypoint_visible[static_cast<std::size_t>(i)]
                              : 0)}));
  }
  doc["keypoints2d"] = std::move(kp);

  doc["caption"] = r.caption;
  doc["negative"] = r.negative;
  doc["gender"] = r.gender;
  doc["action"] = r.action;
  doc["environment"] = r.environment;
  doc["indoor"] = r.indoor;

  if (r.placement) {
    doc["placement"] = {{"translation", vec3_to_json(r.placement->translation)},
                        {"chamfer", r.placement->chamfer},
                        {"collision_free", r.placement->collision_free}};
  }
  if (r.verdict) {
    json v;
    v["iou"] = r.verdict->iou;
    v["kept"] = r.verdict->kept;
    v["point"] = json::array({r.verdict->point_used.x, r.verdict->point_used.y});
    v["threshold"] = r.verdict->threshold;
    if (r.verdict->error) v["error"] = *r.verdict->error;
    doc["verdict"] = std::move(v);
  }
  doc["latency_ms"] = {{"generate", r.generate_latency_ms}, {"segment", r.segment_latency_ms}};
  return doc.dump();
}

SampleRecord record_from_json_line(const std::string& line) {
  const json doc = json::parse(line);
  SampleRecord r;
  r.id = doc.at("id").get<std::string>();
  r.index = doc.at("index").get<std::uint64_t>();
  r.seed = doc.at("seed").get<std::uint64_t>();
  r.status = doc.at("status").get<std::string>();
  if (doc.contains("error")) r.error = doc["error"].get<std::string>();

  const json& paths = doc.at("paths");
  r.normal_path = paths.at("normal").get<std::string>();
  r.mask_path = paths.at("mask").get<std::string>();
  r.depth_path = paths.at("depth").get<std::string>();
  r.image_path = paths.at("image").get<std::string>();

  r.shape.betas = vecxd_from_json(doc.at("shape").at("betas"));
  r.shape.psi = vecxd_from_json(doc.at("shape").at("psi"));
  r.pose.thetas = points_from_json(doc.at("pose").at("thetas"));
  r.pose.root_translation = vec3_from_json(doc.at("pose").at("root_translation"));

  const json& cam = doc.at("camera");
  r.camera.s = cam.at("s").get<double>();
  r.camera.tx = cam.at("tx").get<double>();
  r.camera.ty = cam.at("ty").get<double>();
  r.camera.fov_deg = cam.at("fov_deg").get<double>();
  r.camera.f_ndc = cam.at("f_ndc").get<double>();
  r.camera.transl = vec3_from_json(cam.at("transl"));
  r.camera.width = cam.at("width").get<int>();
  r.camera.height = cam.at("height").get<int>();
  r.extrinsics.rotation = mat3_from_json(doc.at("extrinsics").at("rotation"));
  r.extrinsics.position = vec3_from_json(doc.at("extrinsics").at("position"));

  r.joints3d = points_from_json(doc.at("joints3d"));
  const json& kp = doc.at("keypoints2d");
  r.keypoints2d.resize(2, static_cast<Eigen::Index>(kp.size()));
  r.keypoint_visible.resize(kp.size());
  for (std::size_t i = 0; i < kp.size(); ++i) {
    r.keypoints2d(0, static_cast<Eigen::Index>(i)) = kp[i][0].get<double>();
    r.keypoints2d(1, static_cast<Eigen::Index>(i)) = kp[i][1].get<double>();
    r.keypoint_visible[i] = static_cast<std::uint8_t>(kp[i][2].get<int>());
  }

  r.caption = doc.at("caption").get<std::string>();
  r.negative = doc.at("negative").get<std::vector<std::string>>();
  r.gender = doc.at("gender").get<std::string>();
  r.action = doc.at("action").get<std::string>();
  r.environment = doc.at("environment").get<std::string>();
  r.indoor = doc.at("indoor").get<bool>();

  if (doc.contains("placement")) {
    Placement p;
    p.translation = vec3_from_json(doc["placement"].at("translation"));
    p.chamfer = doc["placement"].at("chamfer").get<double>();
    p.collision_free = doc["placement"].at("collision_free").get<bool>();
    r.placement = p;
  }
  if (doc.contains("verdict")) {
    FilterVerdict v;
    const json& vd = doc["verdict"];
    v.iou = vd.at("iou").get<double>();
    v.kept = vd.at("kept").get<bool>();
    v.point_used.x = vd.at("point").at(0).get<int>();
    v.point_used.y = vd.at("point").at(1).get<int>();
    v.threshold = vd.at("threshold").get<double>();
    if (vd.contains("error")) v.error = vd["error"].get<std::string>();
    r.verdict = v;
  }
  if (doc.contains("latency_ms")) {
    r.generate_latency_ms = doc["latency_ms"].value("generate", 0.0);
    r.segment_latency_ms = doc["latency_ms"].value("segment", 0.0);
  }
  return r;
}

ManifestWriter::ManifestWriter(const std::string& path, const ManifestHeader& header) {
  path_ = path;
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  out_.open(path, std::ios::trunc);
  if (!out_) throw std::runtime_error("manifest: cannot open " + path);
  out_ << header_to_json(header).dump() << '\n';
  out_.flush();
}

ManifestWriter ManifestWriter::open_append(const std::string& path) {
  ManifestReadResult existing = read_manifest(path);
  ManifestWriter w;
  w.path_ = path;
  for (const auto& r : existing.records) w.ids_.insert(r.id);
  w.out_.open(path, std::ios::app);
  if (!w.out_) throw std::runtime_error("manifest: cannot reopen " + path);
  return w;
}

void ManifestWriter::append(const SampleRecord& record) {
  if (record.id.empty()) throw std::invalid_argument("manifest: record without id");
  if (!ids_.insert(record.id).second)
    throw std::invalid_argument("manifest: duplicate id " + record.id);
  if (record.keypoints2d.cols() != record.joints3d.cols()) {
    ids_.erase(record.id);
    throw std::invalid_argument("manifest: keypoint count != joint count for " + record.id);
  }
  out_ << record_to_json_line(record) << '\n';
  out_.flush();
  if (!out_) {
    ids_.erase(record.id);
    throw std::runtime_error("manifest: write failed for " + path_);
  }
}

ManifestReadResult read_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("manifest: cannot open " + path);
  ManifestReadResult out;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      if (!have_header) {
        out.header = header_from_json(json::parse(line));
        have_header = true;
        continue;
      }
      out.records.push_back(record_from_json_line(line));
    } catch (const std::exception& e) {
      out.issues.push_back("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) throw std::runtime_error("manifest: missing header in " + path);
  return out;
}

ManifestStats stats(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("manifest: cannot open " + path);
  ManifestStats s;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (!have_header) {
      try {
        header_from_json(json::parse(line));
      } catch (const std::exception& e) {
        throw std::runtime_error("manifest: bad header: " + std::string(e.what()));
      }
      have_header = true;
      continue;
    }
    SampleRecord r;
    try {
      r = record_from_json_line(line);
    } catch (const std::exception& e) {
      std::cerr << "[humangen][warn] manifest line " << line_no << " corrupt, skipped: "
                << e.what() << "\n";
      ++s.corrupt_lines;
      continue;
    }
    ++s.total;
    if (r.status == "failed") {
      ++s.failed;
    } else if (r.verdict) {
      if (r.verdict->kept)
        ++s.kept;
      else
        ++s.dropped;
      const int bin = std::min(9, static_cast<int>(r.verdict->iou * 10.0));
      ++s.iou_histogram[static_cast<std::size_t>(std::max(0, bin))];
    } else {
      ++s.pending;
    }
    {
      const double span = 120.0 - 25.0;
      int bin = static_cast<int>((r.camera.fov_deg - 25.0) / span * 10.0);
      bin = std::clamp(bin, 0, 9);
      ++s.fov_histogram[static_cast<std::size_t>(bin)];
    }
    if (!r.environment.empty()) ++s.environment_counts[r.environment];
  }
  return s;
}

std::string format_stats(const ManifestStats& s) {
  std::ostringstream out;
  out << "records " << s.total << "  kept " << s.kept << "  dropped " << s.dropped << "  failed "
      << s.failed << "  pending " << s.pending << "  corrupt_lines " << s.corrupt_lines << "\n";
  out << "iou histogram:";
  for (std::size_t i = 0; i < s.iou_histogram.size(); ++i) out << ' ' << s.iou_histogram[i];
  out << "\nfov histogram:";
  for (std::size_t i = 0; i < s.fov_histogram.size(); ++i) out << ' ' << s.fov_histogram[i];
  out << "\nenvironments:\n";
  for (const auto& [env, count] : s.environment_counts)
    out << "  " << env << ": " << count << "\n";
  return out.str();
}

void merge_manifests(const std::vector<std::string>& inputs, const std::string& output) {
  if (inputs.empty()) throw std::invalid_argument("merge: no inputs");
  std::vector<SampleRecord> all;
  ManifestHeader header;
  bool first = true;
  for (const auto& path : inputs) {
    ManifestReadResult r = read_manifest(path);
    if (!r.issues.empty())
      throw std::runtime_error("merge: corrupt input " + path + ": " + r.issues.front());
    if (first) {
      header = r.header;
      first = false;
    } else if (r.header.global_seed != header.global_seed ||
               r.header.config_hash != header.config_hash ||
               r.header.version != header.version) {
      throw std::runtime_error("merge: header mismatch in " + path);
    }
    all.insert(all.end(), r.records.begin(), r.records.end());
  }
  std::sort(all.begin(), all.end(),
            [](const SampleRecord& a, const SampleRecord& b) { return a.index < b.index; });
  ManifestWriter w(output, header);
  for (const auto& r : all) w.append(r);
}

std::vector<std::string> verify_manifest(const std::string& path) {
  std::vector<std::string> issues;
  ManifestReadResult r = read_manifest(path);
  issues.insert(issues.end(), r.issues.begin(), r.issues.end());

  const auto base = std::filesystem::path(path).parent_path();
  std::unordered_set<std::string> seen;
  for (const auto& rec : r.records) {
    if (!seen.insert(rec.id).second) issues.push_back("duplicate id " + rec.id);
    if (rec.keypoints2d.cols() != rec.joints3d.cols())
      issues.push_back("record " + rec.id + ": keypoint count != joint count");
    const bool kept = rec.verdict && rec.verdict->kept;
    if (!kept) continue;
    for (const std::string& p :
         {rec.normal_path, rec.mask_path, rec.depth_path, rec.image_path}) {
      if (p.empty()) continue;
      if (!std::filesystem::exists(base / p))
        issues.push_back("record " + rec.id + ": missing file " + p);
    }
  }
  return issues;
}

std::string make_sample_id(std::uint64_t global_seed, std::uint64_t index) {
  std::uint64_t s = global_seed;
  splitmix64(s);
  s ^= 0x9e3779b97f4a7c15ULL * (index + 1);
  const std::uint64_t h = splitmix64(s);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::string shard_rel_path(const std::string& id, const std::string& suffix) {
  return "shards/" + id.substr(0, 2) + "/" + id + suffix;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buf);
}

}  // namespace hgen
