#include "humangen/scene.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hgen {

int LabeledSceneMesh::class_index(const std::string& name) const {
  for (std::size_t i = 0; i < label_names.size(); ++i)
    if (label_names[i] == name) return static_cast<int>(i);
  return -1;
}

LabeledSceneMesh load_scene(const std::string& obj_path, const std::string& labels_path,
                            const std::string& names_path) {
  std::ifstream obj(obj_path);
  if (!obj) throw std::runtime_error("scene: cannot open " + obj_path);

  std::vector<Vec3> verts;
  std::vector<Eigen::Vector3i> tris;
  std::string line;
  while (std::getline(obj, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      Vec3 p;
      ss >> p.x() >> p.y() >> p.z();
      if (!ss) throw std::runtime_error("scene: malformed vertex line in " + obj_path);
      verts.push_back(p);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ss >> tok) {
        // "i", "i/j", "i/j/k" forms; only the vertex index matters here.
        idx.push_back(std::stoi(tok.substr(0, tok.find('/'))));
      }
      if (idx.size() < 3) throw std::runtime_error("scene: face with <3 vertices in " + obj_path);
      for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
        tris.emplace_back(idx[0] - 1, idx[k] - 1, idx[k + 1] - 1);
      }
    }
  }

  LabeledSceneMesh scene;
  scene.mesh.vertices.resize(3, static_cast<Eigen::Index>(verts.size()));
  for (std::size_t i = 0; i < verts.size(); ++i)
    scene.mesh.vertices.col(static_cast<Eigen::Index>(i)) = verts[i];
  scene.mesh.faces.resize(3, static_cast<Eigen::Index>(tris.size()));
  for (std::size_t i = 0; i < tris.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      const int v = tris[i][k];
      if (v < 0 || v >= static_cast<int>(verts.size()))
        throw std::runtime_error("scene: face index out of range in " + obj_path);
      scene.mesh.faces(k, static_cast<Eigen::Index>(i)) = static_cast<std::uint32_t>(v);
    }
  }

  std::ifstream labels(labels_path);
  if (!labels) throw std::runtime_error("scene: cannot open " + labels_path);
  std::vector<int> label_vals;
  int v = 0;
  while (labels >> v) label_vals.push_back(v);
  if (label_vals.size() != verts.size())
    throw std::runtime_error("scene: label count != vertex count for " + labels_path);
  scene.vertex_labels = Eigen::Map<const Eigen::VectorXi>(
      label_vals.data(), static_cast<Eigen::Index>(label_vals.size()));

  std::ifstream names(names_path);
  if (!names) throw std::runtime_error("scene: cannot open " + names_path);
  while (std::getline(names, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) scene.label_names.push_back(line);
  }
  return scene;
}

void save_scene(const LabeledSceneMesh& scene, const std::string& obj_path,
                const std::string& labels_path, const std::string& names_path) {
  std::ofstream obj(obj_path, std::ios::trunc);
  if (!obj) throw std::runtime_error("scene: cannot write " + obj_path);
  obj.precision(17);
  for (Eigen::Index i = 0; i < scene.mesh.vertices.cols(); ++i) {
    obj << "v " << scene.mesh.vertices(0, i) << ' ' << scene.mesh.vertices(1, i) << ' '
        << scene.mesh.vertices(2, i) << '\n';
  }
  for (Eigen::Index f = 0; f < scene.mesh.faces.cols(); ++f) {
    obj << "f " << scene.mesh.faces(0, f) + 1 << ' ' << scene.mesh.faces(1, f) + 1 << ' '
        << scene.mesh.faces(2, f) + 1 << '\n';
  }
  std::ofstream labels(labels_path, std::ios::trunc);
  for (Eigen::Index i = 0; i < scene.vertex_labels.size(); ++i)
    labels << scene.vertex_labels[i] << '\n';
  std::ofstream names(names_path, std::ios::trunc);
  for (const auto& n : scene.label_names) names << n << '\n';
}

Plane fit_ground(const LabeledSceneMesh& scene) {
  const int floor_class = scene.class_index("floor");
  if (floor_class < 0) throw std::runtime_error("ground fit: no floor class in label table");

  std::vector<Eigen::Index> floor_verts;
  for (Eigen::Index i = 0; i < scene.vertex_labels.size(); ++i)
    if (scene.vertex_labels[i] == floor_class) floor_verts.push_back(i);
  if (floor_verts.size() < 3)
    throw std::runtime_error("ground fit: need at least 3 floor vertices");

  Vec3 centroid = Vec3::Zero();
  for (Eigen::Index i : floor_verts) centroid += scene.mesh.vertices.col(i);
  centroid /= static_cast<Real>(floor_verts.size());

  Mat3 cov = Mat3::Zero();
  for (Eigen::Index i : floor_verts) {
    const Vec3 d = scene.mesh.vertices.col(i) - centroid;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  const Vec3 evals = eig.eigenvalues();  // ascending
  if (evals[1] <= 1e-12 * std::max(evals[2], Real(1e-30)))
    throw std::runtime_error("ground fit: floor vertices are collinear");

  Vec3 normal = eig.eigenvectors().col(0);
  if (normal.y() < 0) normal = -normal;
  if (normal.y() < std::cos(deg2rad(30.0)))
    throw std::runtime_error("ground fit: plane tilted more than 30 degrees from +y");
  return Plane{normal, -normal.dot(centroid)};
}

VoxelizedScene voxelize(const LabeledSceneMesh& scene, Real leaf_size) {
  VoxelizedScene out;
  out.grid = voxelize_mesh(scene.mesh, leaf_size);
  out.ground = fit_ground(scene);
  out.scene_index.build(scene.mesh.vertices);
  return out;
}

Real chamfer_one_sided(const Points3& points_a, const KdTree3& index_b) {
  if (points_a.cols() == 0) throw std::invalid_argument("chamfer: empty source set");
  if (index_b.empty()) throw std::invalid_argument("chamfer: empty target set");
  Real sum = 0;
  for (Eigen::Index i = 0; i < points_a.cols(); ++i) {
    sum += std::sqrt(index_b.nearest(points_a.col(i)).dist2);
  }
  return sum / static_cast<Real>(points_a.cols());
}

Real chamfer_one_sided(const Points3& points_a, const Points3& points_b) {
  if (points_b.cols() == 0) throw std::invalid_argument("chamfer: empty target set");
  return chamfer_one_sided(points_a, KdTree3(points_b));
}

namespace {

// Translation along the plane normal that puts the lowest body vertex exactly
// on the plane.
Vec3 grounding_correction(const Points3& verts, const Vec3& translation, const Plane& plane) {
  Real min_dist = std::numeric_limits<Real>::infinity();
  for (Eigen::Index i = 0; i < verts.cols(); ++i) {
    min_dist = std::min(min_dist, plane.signed_distance(verts.col(i) + translation));
  }
  return translation - min_dist * plane.normal;
}

bool column_is_free(const VoxelGrid& grid, const Aabb& body_box, const Vec3& translation) {
  const Vec3 lo = body_box.min + translation - grid.origin;
  const Vec3 hi = body_box.max + translation - grid.origin;
  const int x0 = static_cast<int>(std::floor(lo.x() / grid.leaf_size));
  const int x1 = static_cast<int>(std::floor(hi.x() / grid.leaf_size));
  const int y0 = static_cast<int>(std::floor(lo.y() / grid.leaf_size));
  const int y1 = static_cast<int>(std::floor(hi.y() / grid.leaf_size));
  const int z0 = static_cast<int>(std::floor(lo.z() / grid.leaf_size));
  const int z1 = static_cast<int>(std::floor(hi.z() / grid.leaf_size));
  for (int ix = x0; ix <= x1; ++ix)
    for (int iy = y0; iy <= y1; ++iy)
      for (int iz = z0; iz <= z1; ++iz) {
        if (grid.in_range(ix, iy, iz) && grid.is_occupied(ix, iy, iz)) return false;
      }
  return true;
}

}  // namespace

Placement place_human(const PosedBody& body, const VoxelizedScene& scene, Rng& rng,
                      const PlacementParams& params) {
  if (body.vertices.cols() == 0) throw std::invalid_argument("placement: empty body");
  const VoxelGrid& grid = scene.grid;
  const Aabb body_box = bounding_box(body.vertices);
  const Vec3 body_center = 0.5 * (body_box.min + body_box.max);

  // Candidate starts: ground the body at each voxel column center and keep
  // the ones whose grounded bounding box overlaps no occupied leaf.
  std::vector<Vec3> candidates;
  for (int ix = 0; ix < grid.dims.x(); ++ix) {
    for (int iz = 0; iz < grid.dims.z(); ++iz) {
      const Vec3 center = grid.cell_center(ix, 0, iz);
      Vec3 t(center.x() - body_center.x(), 0, center.z() - body_center.z());
      t = grounding_correction(body.vertices, t, scene.ground);
      if (column_is_free(grid, body_box, t)) candidates.push_back(t);
    }
  }
  if (candidates.empty())
    throw std::runtime_error("placement: no free voxel column fits the body");

  const Points3& verts = body.vertices;
  Real best_chamfer = -1;
  Vec3 best_t = Vec3::Zero();

  const int attempts = std::min<int>(params.max_attempts, static_cast<int>(candidates.size()));
  for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
    Vec3 t = candidates[rng.index(candidates.size())];
    Real step = std::max(grid.leaf_size * 0.5, 2.0 * params.collision_margin);
    Real chamfer = chamfer_one_sided(Points3(verts.colwise() + t), scene.scene_index);

    for (int iter = 0; iter < params.max_iters && chamfer < params.collision_margin; ++iter) {
      // Mean repulsion away from scene points closer than the margin,
      // restricted to the ground tangent so the feet stay planted.
      Vec3 dir = Vec3::Zero();
      int close = 0;
      for (Eigen::Index i = 0; i < verts.cols(); ++i) {
        const Vec3 p = verts.col(i) + t;
        const auto hit = scene.scene_index.nearest(p);
        const Real d = std::sqrt(hit.dist2);
        if (d < params.collision_margin && d > 1e-12) {
          dir += (p - scene.scene_points().col(hit.index)) / d;
          ++close;
        }
      }
      if (close == 0) break;  // margin violated only by mean, nothing to push against
      dir -= dir.dot(scene.ground.normal) * scene.ground.normal;
      const Real n = dir.norm();
      if (n < 1e-12) break;
      dir /= n;

      const Vec3 t_next = grounding_correction(verts, t + step * dir, scene.ground);
      const Real c_next = chamfer_one_sided(Points3(verts.colwise() + t_next), scene.scene_index);
      if (c_next > chamfer) {
        t = t_next;
        chamfer = c_next;
      } else {
        step *= 0.5;
        if (step < 1e-4) break;
      }
    }

    if (chamfer > best_chamfer) {
      best_chamfer = chamfer;
      best_t = t;
    }
    if (chamfer >= params.collision_margin) {
      return Placement{t, chamfer, true};
    }
    if (attempt + 1 >= attempts && best_chamfer >= 0) break;
  }

  if (best_chamfer >= params.collision_margin) return Placement{best_t, best_chamfer, true};
  throw std::runtime_error("placement: no collision-free spot after max_attempts seeds");
}

Vec3 scene_camera_position(const Vec3& pelvis, Real azimuth, Real radius, Real height_offset) {
  return pelvis + Vec3(radius * std::cos(azimuth), height_offset, radius * std::sin(azimuth));
}

std::pair<CameraSample, Extrinsics> sample_scene_camera(
    const PosedBody& body, const std::vector<int>& torso_joints, int pelvis_index, Rng& rng,
    int width, int height, const CameraRanges& ranges, const SceneCameraParams& params) {
  if (pelvis_index < 0 || pelvis_index >= body.joints.cols())
    throw std::invalid_argument("scene camera: missing pelvis joint");
  if (torso_joints.empty()) throw std::invalid_argument("scene camera: no torso joints");

  const CameraSample cam = sample_camera(rng, width, height, ranges);
  const Vec3 pelvis = body.joints.col(pelvis_index);

  const Vec3 centroid = body.vertices.rowwise().mean();
  Real rho = 0;
  for (Eigen::Index i = 0; i < body.vertices.cols(); ++i)
    rho = std::max(rho, (body.vertices.col(i) - centroid).norm());
  rho = std::max(rho, Real(0.1));

  const Real azimuth = rng.uniform(0.0, 2.0 * kPi);
  const Real dy = rng.uniform(-params.height_range, params.height_range);
  const Real fraction = rng.uniform(params.min_body_fraction, params.max_body_fraction);
  // Body of radius rho spans `fraction` of the image height at distance
  // d = rho * f / fraction (vertical half-FoV tangent is 1/f).
  const Real dist = rho * cam.f_ndc / fraction;
  const Real radius = std::max(std::sqrt(std::max(dist * dist - dy * dy, Real(0))), Real(0.2));

  const Vec3 cam_pos = scene_camera_position(pelvis, azimuth, radius, dy);
  const Vec3 target = body.joints.col(torso_joints[rng.index(torso_joints.size())]);
  return {cam, look_at_extrinsics(cam_pos, target, Vec3::UnitY())};
}

}  // namespace hgen
