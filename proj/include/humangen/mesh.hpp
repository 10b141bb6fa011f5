#pragma once

#include "humangen/types.hpp"

namespace hgen {

struct TriMesh {
  Points3 vertices;
  Faces faces;
};

struct Aabb {
  Vec3 min = Vec3::Constant(std::numeric_limits<Real>::infinity());
  Vec3 max = Vec3::Constant(-std::numeric_limits<Real>::infinity());

  void extend(const Vec3& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }
  Vec3 extent() const { return max - min; }
  bool valid() const { return (max.array() >= min.array()).all(); }
};

inline Aabb bounding_box(const Points3& points) {
  Aabb box;
  box.min = points.rowwise().minCoeff();
  box.max = points.rowwise().maxCoeff();
  return box;
}

/// Area-weighted vertex normals (unnormalized face normals accumulated per
/// vertex, then normalized). Degenerate vertices fall back to +z.
Eigen::Matrix3Xd compute_vertex_normals(const Points3& vertices, const Faces& faces);

}  // namespace hgen
