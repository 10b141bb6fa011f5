#pragma once

#include <string>
#include <vector>

#include "humangen/body_model.hpp"
#include "humangen/camera.hpp"
#include "humangen/kdtree.hpp"
#include "humangen/mesh.hpp"
#include "humangen/octree.hpp"
#include "humangen/rng.hpp"

namespace hgen {

struct Plane {
  Vec3 normal = Vec3::UnitY();
  Real offset = 0;  // signed distance of a point p is normal.dot(p) + offset

  Real signed_distance(const Vec3& p) const { return normal.dot(p) + offset; }
};

/// Triangle mesh with a semantic class per vertex. Class names live in
/// label_names; ground fitting needs a "floor" class.
struct LabeledSceneMesh {
  TriMesh mesh;
  Eigen::VectorXi vertex_labels;
  std::vector<std::string> label_names;

  int class_index(const std::string& name) const;
};

/// Scene mesh I/O: ASCII OBJ (v/f records) plus a sidecar label file with one
/// integer per vertex and a label-name table with one name per line.
LabeledSceneMesh load_scene(const std::string& obj_path, const std::string& labels_path,
                            const std::string& names_path);
void save_scene(const LabeledSceneMesh& scene, const std::string& obj_path,
                const std::string& labels_path, const std::string& names_path);

/// Least-squares plane over floor-labeled vertices, normal oriented toward
/// +y. Throws on degenerate (collinear) floor geometry or a plane tilted more
/// than 30 degrees from +y.
Plane fit_ground(const LabeledSceneMesh& scene);

/// Octree occupancy of the scene plus everything placement needs: fitted
/// ground plane and a nearest-neighbor index over the scene vertices.
struct VoxelizedScene {
  VoxelGrid grid;
  Plane ground;
  KdTree3 scene_index;

  const Points3& scene_points() const { return scene_index.points(); }
};

VoxelizedScene voxelize(const LabeledSceneMesh& scene, Real leaf_size);

/// One-sided Chamfer distance: mean over points_a of the Euclidean distance
/// to the nearest point of points_b.
Real chamfer_one_sided(const Points3& points_a, const Points3& points_b);
Real chamfer_one_sided(const Points3& points_a, const KdTree3& index_b);

struct PlacementParams {
  Real collision_margin = 0.02;  // meters
  int max_iters = 100;
  int max_attempts = 20;
};

struct Placement {
  Vec3 translation = Vec3::Zero();
  Real chamfer = 0;
  bool collision_free = false;
};

/// Grounds the body on the fitted plane at a random free voxel column, then
/// refines the translation by damped repulsion from near scene points until
/// the one-sided Chamfer distance body->scene clears the collision margin.
/// Throws when no free column exists or every attempt stays in collision.
Placement place_human(const PosedBody& body, const VoxelizedScene& scene, Rng& rng,
                      const PlacementParams& params = PlacementParams{});

/// Camera position parameterization used by the scene camera: azimuth around
/// the pelvis in the xz plane, height offset relative to the pelvis.
Vec3 scene_camera_position(const Vec3& pelvis, Real azimuth, Real radius, Real height_offset);

struct SceneCameraParams {
  Real height_range = 1.0;       // +- meters around pelvis height
  Real min_body_fraction = 0.3;  // projected body height / image height
  Real max_body_fraction = 0.9;
};

/// Samples a scene camera: intrinsics from the usual camera rules, position
/// from a random azimuth, a height within +-1 m of the pelvis and a radius
/// chosen so the body spans the configured image fraction; looks at a random
/// torso joint.
std::pair<CameraSample, Extrinsics> sample_scene_camera(
    const PosedBody& body, const std::vector<int>& torso_joints, int pelvis_index, Rng& rng,
    int width, int height, const CameraRanges& ranges = CameraRanges{},
    const SceneCameraParams& params = SceneCameraParams{});

}  // namespace hgen
