#include "humangen/camera.hpp"

#include <cmath>
#include <stdexcept>

namespace hgen {

CameraSample make_camera(Real s, Real tx, Real ty, Real fov_deg, int width, int height) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("camera: bad image size");
  CameraSample c;
  c.s = s;
  c.tx = tx;
  c.ty = ty;
  c.fov_deg = fov_deg;
  c.f_ndc = 1.0 / std::tan(deg2rad(fov_deg) / 2.0);
  c.transl = Vec3(tx, ty, c.f_ndc / s);
  c.width = width;
  c.height = height;
  return c;
}

CameraSample sample_camera(Rng& rng, int width, int height, const CameraRanges& ranges) {
  const Real s = rng.uniform(ranges.s_min, ranges.s_max);
  const Real bound = ranges.shift_coeff / s;
  const Real tx = rng.uniform(-bound, bound);
  const Real ty = rng.uniform(-bound, bound);
  const Real fov = rng.uniform(ranges.fov_min_deg, ranges.fov_max_deg);
  return make_camera(s, tx, ty, fov, width, height);
}

Vec3 derive_translation(const CameraSample& sample) {
  return Vec3(sample.tx, sample.ty, sample.f_ndc / sample.s);
}

Extrinsics look_at_extrinsics(const Vec3& camera_pos, const Vec3& target, const Vec3& up_hint) {
  const Vec3 offset = target - camera_pos;
  const Real dist = offset.norm();
  if (dist < 1e-12) throw std::invalid_argument("look_at: camera position equals target");
  const Vec3 forward = offset / dist;
  Vec3 right = up_hint.cross(forward);
  const Real right_norm = right.norm();
  if (right_norm < 1e-9) throw std::invalid_argument("look_at: up hint parallel to view direction");
  right /= right_norm;
  const Vec3 up = forward.cross(right);  // unit by construction

  Extrinsics e;
  e.rotation.row(0) = right.transpose();
  e.rotation.row(1) = up.transpose();
  e.rotation.row(2) = forward.transpose();
  e.position = camera_pos;
  return e;
}

Mat3 intrinsics_matrix(const CameraSample& sample) {
  Mat3 k = Mat3::Identity();
  k(0, 0) = sample.f_ndc * sample.width / 2.0;
  k(1, 1) = sample.f_ndc * sample.height / 2.0;
  k(0, 2) = sample.width / 2.0;
  k(1, 2) = sample.height / 2.0;
  return k;
}

Projected project(const Points3& camera_points, const CameraSample& sample) {
  const Eigen::Index n = camera_points.cols();
  Projected out;
  out.pixels.resize(2, n);
  out.visible.assign(static_cast<std::size_t>(n), 0);
  const Real fx = sample.f_ndc * sample.width / 2.0;
  const Real fy = sample.f_ndc * sample.height / 2.0;
  const Real cx = sample.width / 2.0;
  const Real cy = sample.height / 2.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Real z = camera_points(2, i);
    if (!(z > kZNear) || !camera_points.col(i).allFinite()) {
      out.pixels.col(i) = Vec2(-1.0, -1.0);
      continue;
    }
    out.pixels(0, i) = cx + fx * camera_points(0, i) / z;
    out.pixels(1, i) = cy + fy * camera_points(1, i) / z;
    out.visible[static_cast<std::size_t>(i)] = 1;
  }
  return out;
}

Vec3 unproject(const Vec2& pixel, Real depth, const CameraSample& sample) {
  const Real fx = sample.f_ndc * sample.width / 2.0;
  const Real fy = sample.f_ndc * sample.height / 2.0;
  return Vec3((pixel.x() - sample.width / 2.0) * depth / fx,
              (pixel.y() - sample.height / 2.0) * depth / fy, depth);
}

}  // namespace hgen
