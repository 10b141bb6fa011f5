#include "humangen/toy_assets.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>

#include "humangen/prompting.hpp"

namespace hgen {

namespace {

using nlohmann::json;

struct MeshAccum {
  std::vector<Vec3> vertices;
  std::vector<Eigen::Vector3i> faces;
  // bone span per vertex for skinning: (joint_a, joint_b, blend toward b)
  std::vector<Eigen::Vector3d> bone_blend;

  int add_vertex(const Vec3& p, int joint_a, int joint_b, double blend) {
    vertices.push_back(p);
    bone_blend.emplace_back(joint_a, joint_b, blend);
    return static_cast<int>(vertices.size()) - 1;
  }
};

// Capsule from p0 to p1: two apex vertices plus four rings (two hemisphere
// rings, two cylinder rings). Skinning blends joint_a -> joint_b along the
// axis.
void add_capsule(MeshAccum& acc, const Vec3& p0, const Vec3& p1, double radius, int segments,
                 int joint_a, int joint_b) {
  const Vec3 axis = (p1 - p0).normalized();
  Vec3 u = std::abs(axis.y()) < 0.9 ? Vec3::UnitY().cross(axis).normalized()
                                    : Vec3::UnitX().cross(axis).normalized();
  const Vec3 v = axis.cross(u);

  struct Ring {
    Vec3 center;
    double radius;
    double blend;
  };
  const double r45 = radius * std::sqrt(0.5);
  const std::vector<Ring> rings = {
      {p0 - axis * r45, r45, 0.0}, {p0, radius, 0.0}, {p1, radius, 1.0},
      {p1 + axis * r45, r45, 1.0}};

  const int bottom = acc.add_vertex(p0 - axis * radius, joint_a, joint_b, 0.0);
  std::vector<std::vector<int>> ring_ids;
  for (const Ring& ring : rings) {
    std::vector<int> ids;
    for (int s = 0; s < segments; ++s) {
      const double a = 2.0 * kPi * s / segments;
      const Vec3 p = ring.center + ring.radius * (std::cos(a) * u + std::sin(a) * v);
      ids.push_back(acc.add_vertex(p, joint_a, joint_b, ring.blend));
    }
    ring_ids.push_back(std::move(ids));
  }
  const int top = acc.add_vertex(p1 + axis * radius, joint_a, joint_b, 1.0);

  for (int s = 0; s < segments; ++s) {
    const int sn = (s + 1) % segments;
    acc.faces.emplace_back(bottom, ring_ids[0][sn], ring_ids[0][s]);
    for (std::size_t r = 0; r + 1 < ring_ids.size(); ++r) {
      acc.faces.emplace_back(ring_ids[r][s], ring_ids[r][sn], ring_ids[r + 1][s]);
      acc.faces.emplace_back(ring_ids[r + 1][s], ring_ids[r][sn], ring_ids[r + 1][sn]);
    }
    acc.faces.emplace_back(top, ring_ids.back()[s], ring_ids.back()[sn]);
  }
}

json motion_to_json(const MotionRecord& m) {
  json doc;
  json betas = json::array(), psi = json::array(), thetas = json::array();
  for (Eigen::Index i = 0; i < m.betas.size(); ++i) betas.push_back(m.betas[i]);
  for (Eigen::Index i = 0; i < m.psi.size(); ++i) psi.push_back(m.psi[i]);
  for (Eigen::Index j = 0; j < m.thetas.cols(); ++j)
    thetas.push_back(json::array({m.thetas(0, j), m.thetas(1, j), m.thetas(2, j)}));
  doc["betas"] = std::move(betas);
  doc["psi"] = std::move(psi);
  doc["thetas"] = std::move(thetas);
  if (!m.gender.empty()) doc["gender"] = m.gender;
  if (!m.action.empty()) doc["action"] = m.action;
  return doc;
}

MotionRecord motion_from_json(const json& doc) {
  MotionRecord m;
  const auto& betas = doc.at("betas");
  const auto& psi = doc.at("psi");
  const auto& thetas = doc.at("thetas");
  m.betas.resize(static_cast<Eigen::Index>(betas.size()));
  for (std::size_t i = 0; i < betas.size(); ++i)
    m.betas[static_cast<Eigen::Index>(i)] = betas[i].get<double>();
  m.psi.resize(static_cast<Eigen::Index>(psi.size()));
  for (std::size_t i = 0; i < psi.size(); ++i)
    m.psi[static_cast<Eigen::Index>(i)] = psi[i].get<double>();
  m.thetas.resize(3, static_cast<Eigen::Index>(thetas.size()));
  for (std::size_t j = 0; j < thetas.size(); ++j)
    for (int k = 0; k < 3; ++k)
      m.thetas(k, static_cast<Eigen::Index>(j)) = thetas[j][k].get<double>();
  m.gender = doc.value("gender", "");
  m.action = doc.value("action", "");
  return m;
}

}  // namespace

BodyModel make_toy_body() {
  // Joints: 0 pelvis, 1 spine, 2 head, 3 left_arm, 4 right_arm.
  const Vec3 joint_pos[5] = {{0.0, 1.00, 0.0},
                             {0.0, 1.25, 0.0},
                             {0.0, 1.52, 0.0},
                             {0.20, 1.40, 0.0},
                             {-0.20, 1.40, 0.0}};

  MeshAccum acc;
  const int seg = 8;
  // torso: pelvis -> spine blend
  add_capsule(acc, {0.0, 0.96, 0.0}, {0.0, 1.42, 0.0}, 0.16, seg, 0, 1);
  // head
  add_capsule(acc, {0.0, 1.52, 0.0}, {0.0, 1.64, 0.0}, 0.10, seg, 2, 2);
  // arms, shoulder to hand
  add_capsule(acc, {0.22, 1.40, 0.0}, {0.58, 1.40, 0.0}, 0.055, seg, 3, 3);
  add_capsule(acc, {-0.22, 1.40, 0.0}, {-0.58, 1.40, 0.0}, 0.055, seg, 4, 4);
  // legs, hip to foot (rigid with the pelvis)
  add_capsule(acc, {0.10, 0.92, 0.0}, {0.10, 0.07, 0.0}, 0.07, seg, 0, 0);
  add_capsule(acc, {-0.10, 0.92, 0.0}, {-0.10, 0.07, 0.0}, 0.07, seg, 0, 0);

  BodyModel m;
  const Eigen::Index n = static_cast<Eigen::Index>(acc.vertices.size());
  m.template_vertices.resize(3, n);
  for (Eigen::Index i = 0; i < n; ++i)
    m.template_vertices.col(i) = acc.vertices[static_cast<std::size_t>(i)];
  m.faces.resize(3, static_cast<Eigen::Index>(acc.faces.size()));
  for (std::size_t f = 0; f < acc.faces.size(); ++f)
    for (int k = 0; k < 3; ++k)
      m.faces(k, static_cast<Eigen::Index>(f)) = static_cast<std::uint32_t>(acc.faces[f][k]);

  m.joint_names = {"pelvis", "spine", "head", "left_arm", "right_arm"};
  m.kinematic_parents.resize(5);
  m.kinematic_parents << -1, 0, 1, 1, 1;

  // Skinning: blend between the capsule's two joints; vertices on the torso
  // span transition pelvis -> spine along the axis.
  m.skin_weights = Eigen::MatrixXd::Zero(n, 5);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& bb = acc.bone_blend[static_cast<std::size_t>(i)];
    const int ja = static_cast<int>(bb[0]);
    const int jb = static_cast<int>(bb[1]);
    const double t = bb[2];
    m.skin_weights(i, ja) += 1.0 - t;
    m.skin_weights(i, jb) += t;
  }

  // Joint regressor: average of the 4 template vertices nearest each nominal
  // joint location.
  std::vector<Eigen::Triplet<double>> triplets;
  for (int j = 0; j < 5; ++j) {
    std::vector<std::pair<double, Eigen::Index>> dist;
    for (Eigen::Index i = 0; i < n; ++i)
      dist.emplace_back((m.template_vertices.col(i) - joint_pos[j]).squaredNorm(), i);
    std::partial_sort(dist.begin(), dist.begin() + 4, dist.end());
    for (int k = 0; k < 4; ++k) triplets.emplace_back(j, dist[k].second, 0.25);
  }
  m.joint_regressor.resize(5, n);
  m.joint_regressor.setFromTriplets(triplets.begin(), triplets.end());

  // Shape channels: 0 stretches height, 1 widens girth. Expression channel
  // puffs the head.
  m.shape_dirs = Eigen::MatrixXd::Zero(3 * n, 2);
  m.expr_dirs = Eigen::MatrixXd::Zero(3 * n, 1);
  const double y_max = m.template_vertices.row(1).maxCoeff();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3 p = m.template_vertices.col(i);
    m.shape_dirs(3 * i + 1, 0) = 0.12 * p.y() / y_max;
    m.shape_dirs(3 * i + 0, 1) = 0.10 * p.x();
    m.shape_dirs(3 * i + 2, 1) = 0.10 * p.z();
    if (p.y() > 1.45) {
      m.expr_dirs(3 * i + 0, 0) = 0.02 * p.x();
      m.expr_dirs(3 * i + 2, 0) = 0.02 * p.z();
    }
  }

  validate_body_model(m);
  return m;
}

std::vector<MotionRecord> fixture_motions(const BodyModel& model) {
  const Eigen::Index j = model.joint_count();
  auto base = [&](double beta0, double beta1) {
    MotionRecord m;
    m.betas = Eigen::Vector2d(beta0, beta1);
    m.psi = Eigen::VectorXd::Zero(model.expr_channels());
    m.thetas = Points3::Zero(3, j);
    return m;
  };
  std::vector<MotionRecord> out;

  // Lean right, left arm raised overhead.
  {
    MotionRecord m = base(0.2, -0.3);
    m.thetas.col(0) = Vec3(0, 0, -0.45);
    m.thetas.col(3) = Vec3(0, 0, 1.9);
    m.gender = "man";
    m.action = "stretching";
    out.push_back(m);
  }
  // Lean left, right arm raised, head tilt.
  {
    MotionRecord m = base(-0.4, 0.5);
    m.thetas.col(0) = Vec3(0, 0, 0.5);
    m.thetas.col(4) = Vec3(0, 0, -2.0);
    m.thetas.col(2) = Vec3(0, 0, 0.4);
    m.gender = "woman";
    m.action = "dancing";
    out.push_back(m);
  }
  // Deep side bend at the spine, left arm forward-down.
  {
    MotionRecord m = base(0.8, 0.1);
    m.thetas.col(1) = Vec3(0, 0, -0.7);
    m.thetas.col(3) = Vec3(0, 0, -0.9);
    m.gender = "man";
    m.action = "playing soccer";
    out.push_back(m);
  }
  // Tilted body with both arms on one side.
  {
    MotionRecord m = base(-0.2, -0.4);
    m.thetas.col(0) = Vec3(0.2, 0, 0.55);
    m.thetas.col(3) = Vec3(0, 0, 1.2);
    m.thetas.col(4) = Vec3(0, 0, 1.0);
    m.gender = "woman";
    m.action = "running";
    out.push_back(m);
  }
  // Twist plus single arm out.
  {
    MotionRecord m = base(0.5, 0.6);
    m.thetas.col(0) = Vec3(0, 0.9, -0.35);
    m.thetas.col(1) = Vec3(0, 0.4, -0.3);
    m.thetas.col(4) = Vec3(0, 0, -1.6);
    m.gender = "man";
    m.action = "working";
    out.push_back(m);
  }
  // Strong lean with head and arm opposed.
  {
    MotionRecord m = base(0.0, 0.0);
    m.thetas.col(0) = Vec3(0, 0, 0.6);
    m.thetas.col(2) = Vec3(0, 0, -0.5);
    m.thetas.col(3) = Vec3(0, 0, 2.2);
    m.gender = "woman";
    m.action = "walking";
    out.push_back(m);
  }
  return out;
}

MotionRecord sample_procedural_motion(const BodyModel& model, Rng& rng) {
  MotionRecord m;
  m.betas.resize(model.shape_channels());
  for (Eigen::Index i = 0; i < m.betas.size(); ++i) m.betas[i] = rng.uniform(-1.0, 1.0);
  m.psi.resize(model.expr_channels());
  for (Eigen::Index i = 0; i < m.psi.size(); ++i) m.psi[i] = rng.uniform(-0.5, 0.5);
  m.thetas = Points3::Zero(3, model.joint_count());
  // Random yaw plus moderate per-joint perturbations.
  m.thetas.col(0) = Vec3(0, rng.uniform(-kPi, kPi), rng.uniform(-0.3, 0.3));
  for (Eigen::Index j = 1; j < model.joint_count(); ++j) {
    Vec3 axis(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    if (axis.norm() < 1e-6) axis = Vec3::UnitZ();
    m.thetas.col(j) = axis.normalized() * rng.uniform(0.0, 0.9);
  }
  return m;
}

std::vector<MotionRecord> load_motions(const std::string& path, const BodyModel& model) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("motions: cannot open " + path);
  std::vector<MotionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      MotionRecord m = motion_from_json(json::parse(line));
      if (m.betas.size() != model.shape_channels() || m.psi.size() != model.expr_channels() ||
          m.thetas.cols() != model.joint_count())
        throw std::runtime_error("parameter dimensions do not match the model");
      out.push_back(std::move(m));
    } catch (const std::exception& e) {
      throw std::runtime_error("motions: line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (out.empty()) throw std::runtime_error("motions: no records in " + path);
  return out;
}

void save_motions(const std::vector<MotionRecord>& motions, const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("motions: cannot write " + path);
  for (const auto& m : motions) f << motion_to_json(m).dump() << '\n';
}

LabeledSceneMesh make_fixture_room() {
  std::vector<Vec3> verts;
  std::vector<Eigen::Vector3i> faces;
  std::vector<int> labels;

  auto add_grid = [&](const Vec3& origin, const Vec3& du, const Vec3& dv, int nu, int nv,
                      int label) {
    const int base = static_cast<int>(verts.size());
    for (int v = 0; v <= nv; ++v)
      for (int u = 0; u <= nu; ++u) {
        verts.push_back(origin + du * u + dv * v);
        labels.push_back(label);
      }
    for (int v = 0; v < nv; ++v)
      for (int u = 0; u < nu; ++u) {
        const int a = base + v * (nu + 1) + u;
        const int b = a + 1;
        const int c = a + (nu + 1);
        const int d = c + 1;
        faces.emplace_back(a, b, c);
        faces.emplace_back(b, d, c);
      }
  };

  const double half = 3.0, height = 3.0, cell = 0.5;
  const int n = static_cast<int>(2 * half / cell);
  const int nh = static_cast<int>(height / cell);
  // floor
  add_grid({-half, 0, -half}, {cell, 0, 0}, {0, 0, cell}, n, n, 0);
  // walls
  add_grid({-half, 0, -half}, {cell, 0, 0}, {0, cell, 0}, n, nh, 1);
  add_grid({-half, 0, half}, {cell, 0, 0}, {0, cell, 0}, n, nh, 1);
  add_grid({-half, 0, -half}, {0, 0, cell}, {0, cell, 0}, n, nh, 1);
  add_grid({half, 0, -half}, {0, 0, cell}, {0, cell, 0}, n, nh, 1);

  auto add_box = [&](const Vec3& lo, const Vec3& hi, int label) {
    const int base = static_cast<int>(verts.size());
    for (int i = 0; i < 8; ++i) {
      verts.emplace_back(i & 1 ? hi.x() : lo.x(), i & 2 ? hi.y() : lo.y(),
                         i & 4 ? hi.z() : lo.z());
      labels.push_back(label);
    }
    const int quads[6][4] = {{0, 1, 3, 2}, {4, 6, 7, 5}, {0, 4, 5, 1},
                             {2, 3, 7, 6}, {0, 2, 6, 4}, {1, 5, 7, 3}};
    for (const auto& q : quads) {
      faces.emplace_back(base + q[0], base + q[1], base + q[2]);
      faces.emplace_back(base + q[0], base + q[2], base + q[3]);
    }
  };
  add_box({-2.6, 0.0, -2.6}, {-1.6, 0.9, -1.6}, 2);  // table
  add_box({1.8, 0.0, 1.2}, {2.6, 2.0, 2.0}, 2);      // cabinet

  LabeledSceneMesh scene;
  scene.mesh.vertices.resize(3, static_cast<Eigen::Index>(verts.size()));
  for (std::size_t i = 0; i < verts.size(); ++i)
    scene.mesh.vertices.col(static_cast<Eigen::Index>(i)) = verts[i];
  scene.mesh.faces.resize(3, static_cast<Eigen::Index>(faces.size()));
  for (std::size_t f = 0; f < faces.size(); ++f)
    for (int k = 0; k < 3; ++k)
      scene.mesh.faces(k, static_cast<Eigen::Index>(f)) = static_cast<std::uint32_t>(faces[f][k]);
  scene.vertex_labels =
      Eigen::Map<const Eigen::VectorXi>(labels.data(), static_cast<Eigen::Index>(labels.size()));
  scene.label_names = {"floor", "wall", "furniture"};
  return scene;
}

void write_demo_assets(const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const BodyModel body = make_toy_body();
  save_body_model(body, (fs::path(dir) / "toy_body.json").string());
  save_motions(fixture_motions(body), (fs::path(dir) / "fixture_motions.jsonl").string());
  const LabeledSceneMesh room = make_fixture_room();
  save_scene(room, (fs::path(dir) / "room.obj").string(),
             (fs::path(dir) / "room.labels").string(), (fs::path(dir) / "room.names").string());

  auto write_list = [&](const std::string& name, const std::vector<std::string>& items) {
    std::ofstream f(fs::path(dir) / name, std::ios::trunc);
    f << "# one entry per line\n";
    for (const auto& s : items) f << s << '\n';
  };
  const EnvironmentTable env = EnvironmentTable::defaults();
  write_list("environments_indoor.txt", env.indoor);
  write_list("environments_outdoor.txt", env.outdoor);
  write_list("actions.txt", default_actions());
}

}  // namespace hgen
