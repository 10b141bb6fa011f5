#include "humangen/body_model.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>

namespace hgen {

namespace {

using nlohmann::json;

const char* kFormatName = "body-model";
constexpr int kFormatVersion = 1;

// Labels that count as torso for camera targeting.
const char* kTorsoLabels[] = {"spine",  "spine1", "spine2", "spine3", "chest",
                              "torso",  "neck",   "left_collar", "right_collar"};

json vec_to_json(const Eigen::Ref<const Eigen::VectorXd>& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd json_to_vec(const json& a) {
  Eigen::VectorXd v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

}  // namespace

int BodyModel::joint_index(const std::string& name) const {
  for (std::size_t i = 0; i < joint_names.size(); ++i)
    if (joint_names[i] == name) return static_cast<int>(i);
  return -1;
}

std::vector<int> BodyModel::torso_joint_indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < joint_names.size(); ++i) {
    for (const char* label : kTorsoLabels) {
      if (joint_names[i] == label) {
        out.push_back(static_cast<int>(i));
        break;
      }
    }
  }
  return out;
}

void validate_body_model(const BodyModel& m) {
  const Eigen::Index n = m.vertex_count();
  const Eigen::Index j = m.joint_count();
  if (n == 0) throw std::runtime_error("body model: no vertices");
  if (j == 0) throw std::runtime_error("body model: no joints");
  if (!m.template_vertices.allFinite()) throw std::runtime_error("body model: non-finite template");

  for (Eigen::Index f = 0; f < m.faces.cols(); ++f) {
    for (int k = 0; k < 3; ++k) {
      if (m.faces(k, f) >= n)
        throw std::runtime_error("body model: face " + std::to_string(f) +
                                 " indexes past the last vertex");
    }
  }

  if (m.shape_dirs.size() > 0 && m.shape_dirs.rows() != 3 * n)
    throw std::runtime_error("body model: shape_dirs row count != 3*vertices");
  if (m.expr_dirs.size() > 0 && m.expr_dirs.rows() != 3 * n)
    throw std::runtime_error("body model: expr_dirs row count != 3*vertices");

  if (m.joint_regressor.rows() != j || m.joint_regressor.cols() != n)
    throw std::runtime_error("body model: joint_regressor must be joints x vertices");

  if (m.skin_weights.rows() != n || m.skin_weights.cols() != j)
    throw std::runtime_error("body model: skin_weights must be vertices x joints");
  for (Eigen::Index v = 0; v < n; ++v) {
    double sum = 0.0;
    for (Eigen::Index k = 0; k < j; ++k) {
      const double w = m.skin_weights(v, k);
      if (w < 0.0)
        throw std::runtime_error("body model: negative skin weight at vertex " +
                                 std::to_string(v));
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-6)
      throw std::runtime_error("body model: skin weight row " + std::to_string(v) +
                               " sums to " + std::to_string(sum));
  }

  if (static_cast<Eigen::Index>(m.joint_names.size()) != j)
    throw std::runtime_error("body model: joint_names size mismatch");

  int roots = 0;
  for (Eigen::Index k = 0; k < j; ++k) {
    const int p = m.kinematic_parents[k];
    if (p == -1) {
      ++roots;
    } else if (p < 0 || p >= j) {
      throw std::runtime_error("body model: parent index out of range at joint " +
                               std::to_string(k));
    }
  }
  if (roots != 1) throw std::runtime_error("body model: kinematic tree must have exactly one root");
  for (Eigen::Index k = 0; k < j; ++k) {
    // Walk to the root; more than j hops means a cycle.
    int cur = static_cast<int>(k);
    for (Eigen::Index hops = 0; cur != -1; ++hops) {
      if (hops > j) throw std::runtime_error("body model: kinematic cycle at joint " +
                                             std::to_string(k));
      cur = m.kinematic_parents[cur];
    }
  }

  if (m.pelvis_index() < 0) throw std::runtime_error("body model: missing pelvis joint");
  if (m.torso_joint_indices().empty())
    throw std::runtime_error("body model: no torso-labeled joint");
}

BodyModel load_body_model(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("body model: cannot open " + path);
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::exception& e) {
    throw std::runtime_error("body model: parse failure in " + path + ": " + e.what());
  }
  if (doc.value("format", "") != kFormatName)
    throw std::runtime_error("body model: unrecognized format in " + path);

  BodyModel m;
  m.joint_names = doc.at("joint_names").get<std::vector<std::string>>();
  const auto parents = doc.at("parents").get<std::vector<int>>();
  m.kinematic_parents = Eigen::Map<const Eigen::VectorXi>(parents.data(),
                                                          static_cast<Eigen::Index>(parents.size()));

  const Eigen::VectorXd verts = json_to_vec(doc.at("template_vertices"));
  if (verts.size() % 3 != 0) throw std::runtime_error("body model: vertex array not 3N");
  const Eigen::Index n = verts.size() / 3;
  m.template_vertices = Eigen::Map<const Points3>(verts.data(), 3, n);

  const auto face_idx = doc.at("faces").get<std::vector<std::uint32_t>>();
  if (face_idx.size() % 3 != 0) throw std::runtime_error("body model: face array not 3F");
  m.faces = Eigen::Map<const Faces>(face_idx.data(), 3,
                                    static_cast<Eigen::Index>(face_idx.size() / 3));

  auto load_dirs = [&](const char* key) {
    const json& d = doc.at(key);
    const Eigen::Index channels = d.at("channels").get<Eigen::Index>();
    const Eigen::VectorXd data = json_to_vec(d.at("data"));
    if (data.size() != 3 * n * channels)
      throw std::runtime_error(std::string("body model: ") + key + " data size mismatch");
    return Eigen::MatrixXd(Eigen::Map<const Eigen::MatrixXd>(data.data(), 3 * n, channels));
  };
  m.shape_dirs = load_dirs("shape_dirs");
  m.expr_dirs = load_dirs("expr_dirs");

  const json& reg = doc.at("joint_regressor");
  const Eigen::Index jr = reg.at("rows").get<Eigen::Index>();
  const Eigen::Index jc = reg.at("cols").get<Eigen::Index>();
  std::vector<Eigen::Triplet<double>> triplets;
  for (const auto& e : reg.at("entries")) {
    triplets.emplace_back(e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>());
  }
  m.joint_regressor.resize(jr, jc);
  m.joint_regressor.setFromTriplets(triplets.begin(), triplets.end());

  const Eigen::VectorXd weights = json_to_vec(doc.at("skin_weights"));
  const Eigen::Index j = m.kinematic_parents.size();
  if (weights.size() != n * j) throw std::runtime_error("body model: skin_weights size mismatch");
  // File is row-major (per vertex); map as column-major transpose.
  m.skin_weights =
      Eigen::Map<const Eigen::MatrixXd>(weights.data(), j, n).transpose();

  validate_body_model(m);
  return m;
}

void save_body_model(const BodyModel& m, const std::string& path) {
  json doc;
  doc["format"] = kFormatName;
  doc["version"] = kFormatVersion;
  doc["joint_names"] = m.joint_names;
  doc["parents"] = std::vector<int>(m.kinematic_parents.data(),
                                    m.kinematic_parents.data() + m.kinematic_parents.size());
  doc["template_vertices"] = vec_to_json(
      Eigen::Map<const Eigen::VectorXd>(m.template_vertices.data(), m.template_vertices.size()));
  {
    json faces = json::array();
    for (Eigen::Index f = 0; f < m.faces.cols(); ++f)
      for (int k = 0; k < 3; ++k) faces.push_back(m.faces(k, f));
    doc["faces"] = std::move(faces);
  }
  auto dirs_to_json = [](const Eigen::MatrixXd& d) {
    json out;
    out["channels"] = d.cols();
    out["data"] = vec_to_json(Eigen::Map<const Eigen::VectorXd>(d.data(), d.size()));
    return out;
  };
  doc["shape_dirs"] = dirs_to_json(m.shape_dirs);
  doc["expr_dirs"] = dirs_to_json(m.expr_dirs);
  {
    json reg;
    reg["rows"] = m.joint_regressor.rows();
    reg["cols"] = m.joint_regressor.cols();
    json entries = json::array();
    for (int k = 0; k < m.joint_regressor.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(m.joint_regressor, k); it; ++it) {
        entries.push_back(json::array({it.row(), it.col(), it.value()}));
      }
    }
    reg["entries"] = std::move(entries);
    doc["joint_regressor"] = std::move(reg);
  }
  {
    // Row-major on disk.
    Eigen::MatrixXd wt = m.skin_weights.transpose();
    doc["skin_weights"] = vec_to_json(Eigen::Map<const Eigen::VectorXd>(wt.data(), wt.size()));
  }
  // Reserved for pose-dependent corrective blendshapes; not interpreted.
  doc["pose_corrective_dirs"] = nullptr;

  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("body model: cannot write " + path);
  f << doc.dump();
  if (!f) throw std::runtime_error("body model: write failed for " + path);
}

Points3 shaped_template(const BodyModel& model, const ShapeParams& shape) {
  if (shape.betas.size() != model.shape_channels() || shape.psi.size() != model.expr_channels())
    throw std::invalid_argument("shape params: channel count mismatch");
  if (!shape.betas.allFinite() || !shape.psi.allFinite())
    throw std::invalid_argument("shape params: non-finite input");
  Points3 shaped = model.template_vertices;
  auto flat = Eigen::Map<Eigen::VectorXd>(shaped.data(), shaped.size());
  if (model.shape_dirs.size() > 0) flat += model.shape_dirs * shape.betas;
  if (model.expr_dirs.size() > 0) flat += model.expr_dirs * shape.psi;
  return shaped;
}

Points3 rest_joints(const BodyModel& model, const ShapeParams& shape) {
  return shaped_template(model, shape) * model.joint_regressor.transpose();
}

PosedBody forward(const BodyModel& model, const ShapeParams& shape, const PoseParams& pose) {
  const Eigen::Index j = model.joint_count();
  if (pose.thetas.cols() != j) throw std::invalid_argument("pose params: theta count mismatch");
  if (!pose.thetas.allFinite() || !pose.root_translation.allFinite())
    throw std::invalid_argument("pose params: non-finite input");

  const Points3 shaped = shaped_template(model, shape);
  const Points3 rest = shaped * model.joint_regressor.transpose();

  // Children-first order so every parent transform exists before its subtree.
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(j));
  {
    std::vector<std::vector<int>> children(static_cast<std::size_t>(j));
    int root = -1;
    for (Eigen::Index k = 0; k < j; ++k) {
      const int p = model.kinematic_parents[k];
      if (p == -1)
        root = static_cast<int>(k);
      else
        children[static_cast<std::size_t>(p)].push_back(static_cast<int>(k));
    }
    std::vector<int> stack{root};
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      order.push_back(cur);
      for (int c : children[static_cast<std::size_t>(cur)]) stack.push_back(c);
    }
  }

  std::vector<Mat3> rot_world(static_cast<std::size_t>(j));
  Points3 joint_world(3, j);
  for (int k : order) {
    const Mat3 local = rodrigues(pose.thetas.col(k));
    const int p = model.kinematic_parents[k];
    if (p == -1) {
      rot_world[static_cast<std::size_t>(k)] = local;
      joint_world.col(k) = rest.col(k);
    } else {
      rot_world[static_cast<std::size_t>(k)] = rot_world[static_cast<std::size_t>(p)] * local;
      joint_world.col(k) =
          rot_world[static_cast<std::size_t>(p)] * (rest.col(k) - rest.col(p)) +
          joint_world.col(p);
    }
  }

  PosedBody out;
  out.vertices = Points3::Zero(3, model.vertex_count());
  for (Eigen::Index k = 0; k < j; ++k) {
    const Mat3& r = rot_world[static_cast<std::size_t>(k)];
    const Vec3 t = joint_world.col(k) - r * rest.col(k);
    Points3 term = r * shaped;
    term.colwise() += t;
    out.vertices.array() +=
        term.array().rowwise() * model.skin_weights.col(k).transpose().array();
  }
  out.vertices.colwise() += pose.root_translation;
  out.joints = joint_world.colwise() + pose.root_translation;
  out.faces = model.faces;
  return out;
}

}  // namespace hgen
