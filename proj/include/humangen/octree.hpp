#pragma once

#include <cstdint>
#include <unordered_set>

#include "humangen/mesh.hpp"
#include "humangen/types.hpp"

namespace hgen {

/// Separating-axis triangle vs axis-aligned box test (13 axes). Boxes are
/// closed: touching contact counts as intersection.
bool triangle_intersects_box(const Vec3& box_center, const Vec3& box_half, const Vec3& a,
                             const Vec3& b, const Vec3& c);

/// Uniform leaf grid addressed by integer cell coordinates; occupancy is
/// filled by an octree descent over the mesh.
struct VoxelGrid {
  Vec3 origin = Vec3::Zero();
  Real leaf_size = 0;
  Eigen::Vector3i dims = Eigen::Vector3i::Zero();
  std::unordered_set<std::uint64_t> occupied;

  static std::uint64_t key(int ix, int iy, int iz) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 42) |
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(iy) & 0x1fffff) << 21) |
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(iz) & 0x1fffff));
  }

  bool in_range(int ix, int iy, int iz) const {
    return ix >= 0 && iy >= 0 && iz >= 0 && ix < dims.x() && iy < dims.y() && iz < dims.z();
  }
  bool is_occupied(int ix, int iy, int iz) const {
    return occupied.count(key(ix, iy, iz)) != 0;
  }
  Vec3 cell_min(int ix, int iy, int iz) const {
    return origin + leaf_size * Vec3(ix, iy, iz);
  }
  Vec3 cell_center(int ix, int iy, int iz) const {
    return origin + leaf_size * Vec3(ix + 0.5, iy + 0.5, iz + 0.5);
  }
};

/// Octree voxelization: a leaf is occupied iff some mesh triangle intersects
/// its closed box. Throws on an empty mesh or non-positive leaf size.
VoxelGrid voxelize_mesh(const TriMesh& mesh, Real leaf_size);

}  // namespace hgen
