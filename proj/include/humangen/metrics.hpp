#pragma once

#include "humangen/body_model.hpp"
#include "humangen/image.hpp"
#include "humangen/types.hpp"

namespace hgen {

/// Ordered joints in meters; errors are reported in millimeters.
struct JointSet {
  Points3 points;
  int pelvis_index = 0;
};

struct SimilarityTransform {
  Real scale = 1.0;
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Points3 apply(const Points3& p) const {
    return (scale * (rotation * p)).colwise() + translation;
  }
};

/// Mean per-joint position error after pelvis alignment, millimeters.
Real mpjpe(const JointSet& pred, const JointSet& gt);

/// Least-squares similarity transform pred -> gt (closed form via the SVD of
/// the cross-covariance, reflections excluded). Needs >= 3 non-collinear
/// joints.
SimilarityTransform procrustes_align(const JointSet& pred, const JointSet& gt);

/// MPJPE after Procrustes alignment, millimeters.
Real pa_mpjpe(const JointSet& pred, const JointSet& gt);

/// Mean per-vertex error after pelvis alignment (pelvis positions supplied
/// from the joint sets), millimeters.
Real pve(const Points3& pred_vertices, const Points3& gt_vertices, const Vec3& pred_pelvis,
         const Vec3& gt_pelvis);

/// Neutral-pose per-vertex error after optimal uniform scale correction over
/// centroid-centered vertices, millimeters.
Real pve_t_sc(const ShapeParams& pred_shape, const ShapeParams& gt_shape, const BodyModel& model);

struct AngularErrorStats {
  Real mean_deg = 0;
  Real median_deg = 0;
  Real rms_deg = 0;
};

/// Per-pixel angular error between unit normal maps over the valid mask.
/// Dot products are clamped to [-1, 1]; the median of an even count is the
/// lower middle value.
AngularErrorStats normal_angular_error(const NormalMapImage& pred, const NormalMapImage& gt,
                                       const Mask& valid);

}  // namespace hgen
