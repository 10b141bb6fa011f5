#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <string>
#include <vector>

#include "humangen/types.hpp"

namespace hgen {

/// Parametric triangulated body: template mesh, shape/expression blendshape
/// banks, sparse joint regressor, kinematic tree and skinning weights.
/// Immutable after load; forward() is a pure function of (model, params).
struct BodyModel {
  Points3 template_vertices;             // 3 x N
  Faces faces;                           // 3 x F
  Eigen::MatrixXd shape_dirs;            // 3N x num_shape_channels
  Eigen::MatrixXd expr_dirs;             // 3N x num_expr_channels
  Eigen::SparseMatrix<double> joint_regressor;  // J x N
  Eigen::VectorXi kinematic_parents;     // J, -1 for the single root
  Eigen::MatrixXd skin_weights;          // N x J, rows sum to 1
  std::vector<std::string> joint_names;  // J

  Eigen::Index vertex_count() const { return template_vertices.cols(); }
  Eigen::Index joint_count() const { return kinematic_parents.size(); }
  Eigen::Index shape_channels() const { return shape_dirs.cols(); }
  Eigen::Index expr_channels() const { return expr_dirs.cols(); }

  int joint_index(const std::string& name) const;  // -1 when absent
  int pelvis_index() const { return joint_index("pelvis"); }
  /// Joints whose name marks them as part of the torso.
  std::vector<int> torso_joint_indices() const;
};

struct ShapeParams {
  Eigen::VectorXd betas;
  Eigen::VectorXd psi;

  static ShapeParams zero(const BodyModel& model) {
    return {Eigen::VectorXd::Zero(model.shape_channels()),
            Eigen::VectorXd::Zero(model.expr_channels())};
  }
};

struct PoseParams {
  Points3 thetas;  // 3 x J axis-angle per joint
  Vec3 root_translation = Vec3::Zero();

  static PoseParams zero(const BodyModel& model) {
    return {Points3::Zero(3, model.joint_count()), Vec3::Zero()};
  }
};

struct PosedBody {
  Points3 vertices;
  Points3 joints;
  Faces faces;
};

/// Throws std::runtime_error naming the offending field (and vertex index for
/// per-vertex violations) when any model invariant fails.
void validate_body_model(const BodyModel& model);

BodyModel load_body_model(const std::string& path);
void save_body_model(const BodyModel& model, const std::string& path);

/// Shaped template: template + shape_dirs * betas + expr_dirs * psi.
Points3 shaped_template(const BodyModel& model, const ShapeParams& shape);

/// Rest joint locations: joint_regressor applied to the shaped template.
Points3 rest_joints(const BodyModel& model, const ShapeParams& shape);

/// Full forward pass: blendshapes, forward kinematics over axis-angle pose,
/// linear blend skinning, then root translation.
PosedBody forward(const BodyModel& model, const ShapeParams& shape, const PoseParams& pose);

}  // namespace hgen
