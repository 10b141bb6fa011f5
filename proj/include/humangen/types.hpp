#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace hgen {

using Real = double;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec3f = Eigen::Vector3f;
using Mat3 = Eigen::Matrix3d;

// Point sets are stored one column per point so that flattened storage is
// x0,y0,z0,x1,... and rigid transforms are single matrix products.
using Points3 = Eigen::Matrix3Xd;
using Pixels2 = Eigen::Matrix2Xd;
using Faces = Eigen::Matrix<std::uint32_t, 3, Eigen::Dynamic>;

constexpr Real kPi = 3.14159265358979323846;

inline Real deg2rad(Real d) { return d * kPi / 180.0; }
inline Real rad2deg(Real r) { return r * 180.0 / kPi; }

/// Skew-symmetric cross-product matrix of a 3-vector.
template <typename Derived>
Mat3 skew(const Eigen::MatrixBase<Derived>& v) {
  Mat3 m;
  m << 0, -v(2), v(1),
       v(2), 0, -v(0),
      -v(1), v(0), 0;
  return m;
}

/// Rodrigues rotation from an axis-angle 3-vector (angle = norm, radians).
/// Angles below 1e-8 fall back to the first-order expansion I + [w]x.
template <typename Derived>
Mat3 rodrigues(const Eigen::MatrixBase<Derived>& aa) {
  const Real angle = aa.norm();
  if (angle < 1e-8) {
    return Mat3::Identity() + skew(aa);
  }
  const Vec3 axis = aa / angle;
  const Mat3 k = skew(axis);
  return Mat3::Identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * k * k;
}

}  // namespace hgen
