#include "humangen/mesh.hpp"

namespace hgen {

Eigen::Matrix3Xd compute_vertex_normals(const Points3& vertices, const Faces& faces) {
  Eigen::Matrix3Xd normals = Eigen::Matrix3Xd::Zero(3, vertices.cols());
  for (Eigen::Index f = 0; f < faces.cols(); ++f) {
    const Eigen::Index a = faces(0, f), b = faces(1, f), c = faces(2, f);
    const Vec3 fn =
        (vertices.col(b) - vertices.col(a)).cross(vertices.col(c) - vertices.col(a));
    normals.col(a) += fn;
    normals.col(b) += fn;
    normals.col(c) += fn;
  }
  for (Eigen::Index v = 0; v < normals.cols(); ++v) {
    const Real norm = normals.col(v).norm();
    if (norm > 0.0)
      normals.col(v) /= norm;
    else
      normals.col(v) = Vec3(0, 0, 1);
  }
  return normals;
}

}  // namespace hgen
