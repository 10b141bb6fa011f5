#include "humangen/octree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace hgen {

namespace {

inline void axis_project(const Vec3& axis, const Vec3& v0, const Vec3& v1, const Vec3& v2,
                         Real& lo, Real& hi) {
  const Real p0 = axis.dot(v0);
  const Real p1 = axis.dot(v1);
  const Real p2 = axis.dot(v2);
  lo = std::min({p0, p1, p2});
  hi = std::max({p0, p1, p2});
}

}  // namespace

bool triangle_intersects_box(const Vec3& box_center, const Vec3& box_half, const Vec3& a,
                             const Vec3& b, const Vec3& c) {
  const Vec3 v0 = a - box_center;
  const Vec3 v1 = b - box_center;
  const Vec3 v2 = c - box_center;

  // Box axes: triangle AABB vs box.
  for (int i = 0; i < 3; ++i) {
    const Real lo = std::min({v0[i], v1[i], v2[i]});
    const Real hi = std::max({v0[i], v1[i], v2[i]});
    if (lo > box_half[i] || hi < -box_half[i]) return false;
  }

  const Vec3 e0 = v1 - v0;
  const Vec3 e1 = v2 - v1;
  const Vec3 e2 = v0 - v2;

  // Triangle plane vs box.
  const Vec3 n = e0.cross(e1);
  const Real dist = n.dot(v0);
  const Real radius =
      box_half.x() * std::abs(n.x()) + box_half.y() * std::abs(n.y()) + box_half.z() * std::abs(n.z());
  if (std::abs(dist) > radius) return false;

  // Nine cross-product axes e_i x unit_j.
  const Vec3 edges[3] = {e0, e1, e2};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Vec3 axis = Vec3::Unit(j).cross(edges[i]);
      if (axis.squaredNorm() < 1e-30) continue;
      Real lo, hi;
      axis_project(axis, v0, v1, v2, lo, hi);
      const Real r = box_half.x() * std::abs(axis.x()) + box_half.y() * std::abs(axis.y()) +
                     box_half.z() * std::abs(axis.z());
      if (lo > r || hi < -r) return false;
    }
  }
  return true;
}

namespace {

struct OctreeBuilder {
  const TriMesh* mesh;
  VoxelGrid* grid;

  void descend(const Eigen::Vector3i& lo, int size, const std::vector<Eigen::Index>& tris) {
    if (tris.empty()) return;
    // Skip nodes fully outside the grid.
    if (lo.x() >= grid->dims.x() || lo.y() >= grid->dims.y() || lo.z() >= grid->dims.z()) return;

    const Vec3 box_min = grid->origin + grid->leaf_size * lo.cast<Real>();
    const Vec3 half = Vec3::Constant(0.5 * grid->leaf_size * size);
    const Vec3 center = box_min + half;

    std::vector<Eigen::Index> hits;
    hits.reserve(tris.size());
    for (Eigen::Index t : tris) {
      const Vec3 a = mesh->vertices.col(mesh->faces(0, t));
      const Vec3 b = mesh->vertices.col(mesh->faces(1, t));
      const Vec3 c = mesh->vertices.col(mesh->faces(2, t));
      if (triangle_intersects_box(center, half, a, b, c)) hits.push_back(t);
    }
    if (hits.empty()) return;

    if (size == 1) {
      grid->occupied.insert(VoxelGrid::key(lo.x(), lo.y(), lo.z()));
      return;
    }
    const int child = size / 2;
    for (int dz = 0; dz < 2; ++dz)
      for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx) {
          descend(lo + child * Eigen::Vector3i(dx, dy, dz), child, hits);
        }
  }
};

}  // namespace

VoxelGrid voxelize_mesh(const TriMesh& mesh, Real leaf_size) {
  if (mesh.vertices.cols() == 0 || mesh.faces.cols() == 0)
    throw std::invalid_argument("voxelize: empty mesh");
  if (!(leaf_size > 0)) throw std::invalid_argument("voxelize: leaf size must be positive");
  const Aabb box = bounding_box(mesh.vertices);
  if (!box.extent().allFinite()) throw std::invalid_argument("voxelize: non-finite mesh bounds");

  VoxelGrid grid;
  grid.origin = box.min;
  grid.leaf_size = leaf_size;
  for (int i = 0; i < 3; ++i) {
    grid.dims[i] = std::max(1, static_cast<int>(std::ceil(box.extent()[i] / leaf_size - 1e-12)));
  }

  int root = 1;
  while (root < grid.dims.maxCoeff()) root *= 2;

  std::vector<Eigen::Index> all(static_cast<std::size_t>(mesh.faces.cols()));
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<Eigen::Index>(i);
  OctreeBuilder builder{&mesh, &grid};
  builder.descend(Eigen::Vector3i::Zero(), root, all);
  return grid;
}

}  // namespace hgen
