#pragma once

#include <cstdint>
#include <vector>

#include "humangen/rng.hpp"
#include "humangen/types.hpp"

namespace hgen {

/// Sampling bounds for the randomized camera. Defaults are the pipeline
/// contract: s in [0.45, 1.1], shifts in [-0.4/s, 0.4/s], FoV in [25, 120]
/// degrees.
struct CameraRanges {
  Real s_min = 0.45;
  Real s_max = 1.1;
  Real shift_coeff = 0.4;
  Real fov_min_deg = 25.0;
  Real fov_max_deg = 120.0;
};

/// One simulated camera: orthographic scale, normalized shifts, horizontal
/// FoV, NDC focal length f = 1/tan(FoV/2), and the derived body translation
/// [tx, ty, f/s].
struct CameraSample {
  Real s = 1.0;
  Real tx = 0.0;
  Real ty = 0.0;
  Real fov_deg = 60.0;
  Real f_ndc = 0.0;
  Vec3 transl = Vec3::Zero();
  int width = 0;
  int height = 0;
};

struct Extrinsics {
  Mat3 rotation = Mat3::Identity();  // world -> camera, rows are camera axes
  Vec3 position = Vec3::Zero();      // camera center in world coordinates

  Vec3 to_camera(const Vec3& world) const { return rotation * (world - position); }
  Points3 to_camera(const Points3& world) const {
    return rotation * (world.colwise() - position);
  }
};

constexpr Real kZNear = 1e-4;

/// Builds a camera from explicit parameters, computing the derived fields.
CameraSample make_camera(Real s, Real tx, Real ty, Real fov_deg, int width, int height);

/// Draws scale, shifts and FoV uniformly within the ranges; all derived
/// fields filled. Identical rng state gives an identical sample.
CameraSample sample_camera(Rng& rng, int width, int height,
                           const CameraRanges& ranges = CameraRanges{});

/// Body translation [tx, ty, f/s] implied by a sample.
Vec3 derive_translation(const CameraSample& sample);

/// World-to-camera rotation looking from camera_pos at target. Camera forward
/// is +z; up_hint fixes the roll. Throws if up_hint is parallel to the view
/// direction.
Extrinsics look_at_extrinsics(const Vec3& camera_pos, const Vec3& target,
                              const Vec3& up_hint = Vec3(0, 1, 0));

/// Pixel intrinsics for a sample: fx = f*W/2, fy = f*H/2, principal point at
/// the image center.
Mat3 intrinsics_matrix(const CameraSample& sample);

struct Projected {
  Pixels2 pixels;
  std::vector<std::uint8_t> visible;  // false when z <= z_near
};

/// Projects camera-space points to pixel coordinates. Points at or behind the
/// near plane get visible = false and a finite (-1, -1) sentinel.
Projected project(const Points3& camera_points, const CameraSample& sample);

/// Inverse of project for a known camera-space depth.
Vec3 unproject(const Vec2& pixel, Real depth, const CameraSample& sample);

}  // namespace hgen
