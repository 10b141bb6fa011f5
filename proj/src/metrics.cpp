#include "humangen/metrics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hgen {

namespace {

constexpr Real kMetersToMm = 1000.0;

Real mean_column_distance(const Points3& a, const Points3& b) {
  return (a - b).colwise().norm().mean();
}

void require_same_count(const Points3& a, const Points3& b, const char* what) {
  if (a.cols() != b.cols()) throw std::invalid_argument(std::string(what) + ": count mismatch");
  if (a.cols() == 0) throw std::invalid_argument(std::string(what) + ": empty input");
}

}  // namespace

Real mpjpe(const JointSet& pred, const JointSet& gt) {
  require_same_count(pred.points, gt.points, "mpjpe");
  const Points3 p = pred.points.colwise() - pred.points.col(pred.pelvis_index).eval();
  const Points3 g = gt.points.colwise() - gt.points.col(gt.pelvis_index).eval();
  return mean_column_distance(p, g) * kMetersToMm;
}

SimilarityTransform procrustes_align(const JointSet& pred, const JointSet& gt) {
  require_same_count(pred.points, gt.points, "procrustes");
  const Eigen::Index n = pred.points.cols();
  if (n < 3) throw std::invalid_argument("procrustes: need at least 3 joints");

  const Vec3 mu_p = pred.points.rowwise().mean();
  const Vec3 mu_g = gt.points.rowwise().mean();
  const Points3 x = pred.points.colwise() - mu_p;
  const Points3 y = gt.points.colwise() - mu_g;

  const Real var_p = x.squaredNorm() / static_cast<Real>(n);
  if (var_p < 1e-18) throw std::invalid_argument("procrustes: degenerate prediction");

  const Mat3 cov = y * x.transpose() / static_cast<Real>(n);
  Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues()[1] < 1e-15 * std::max(svd.singularValues()[0], Real(1e-30)))
    throw std::invalid_argument("procrustes: joints are collinear");

  Vec3 d = Vec3::Ones();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0) d[2] = -1;

  SimilarityTransform t;
  t.rotation = svd.matrixU() * d.asDiagonal() * svd.matrixV().transpose();
  t.scale = svd.singularValues().dot(d) / var_p;
  t.translation = mu_g - t.scale * (t.rotation * mu_p);
  return t;
}

Real pa_mpjpe(const JointSet& pred, const JointSet& gt) {
  const SimilarityTransform t = procrustes_align(pred, gt);
  return mean_column_distance(t.apply(pred.points), gt.points) * kMetersToMm;
}

Real pve(const Points3& pred_vertices, const Points3& gt_vertices, const Vec3& pred_pelvis,
         const Vec3& gt_pelvis) {
  require_same_count(pred_vertices, gt_vertices, "pve");
  const Points3 p = pred_vertices.colwise() - pred_pelvis;
  const Points3 g = gt_vertices.colwise() - gt_pelvis;
  return mean_column_distance(p, g) * kMetersToMm;
}

Real pve_t_sc(const ShapeParams& pred_shape, const ShapeParams& gt_shape,
              const BodyModel& model) {
  const PoseParams neutral = PoseParams::zero(model);
  const Points3 vp = forward(model, pred_shape, neutral).vertices;
  const Points3 vg = forward(model, gt_shape, neutral).vertices;

  const Points3 p = vp.colwise() - vp.rowwise().mean().eval();
  const Points3 g = vg.colwise() - vg.rowwise().mean().eval();
  const Real denom = p.squaredNorm();
  if (denom < 1e-18) throw std::invalid_argument("pve_t_sc: degenerate zero-norm vertices");
  const Real scale = p.cwiseProduct(g).sum() / denom;
  return mean_column_distance(scale * p, g) * kMetersToMm;
}

AngularErrorStats normal_angular_error(const NormalMapImage& pred, const NormalMapImage& gt,
                                       const Mask& valid) {
  if (pred.width != gt.width || pred.height != gt.height || pred.width != valid.width ||
      pred.height != valid.height)
    throw std::invalid_argument("normal error: size mismatch");

  std::vector<Real> angles;
  angles.reserve(valid.count());
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(valid.data.size()); ++i) {
    if (!valid.data[static_cast<std::size_t>(i)]) continue;
    Eigen::Vector3f a = pred.normals.col(i);
    Eigen::Vector3f b = gt.normals.col(i);
    const float na = a.norm(), nb = b.norm();
    if (na > 0) a /= na;
    if (nb > 0) b /= nb;
    const Real dot = std::clamp<Real>(a.dot(b), -1.0, 1.0);
    angles.push_back(rad2deg(std::acos(dot)));
  }
  if (angles.empty()) throw std::invalid_argument("normal error: empty valid set");

  AngularErrorStats stats;
  Real sum = 0, sum2 = 0;
  for (Real a : angles) {
    sum += a;
    sum2 += a * a;
  }
  const Real n = static_cast<Real>(angles.size());
  stats.mean_deg = sum / n;
  stats.rms_deg = std::sqrt(sum2 / n);
  std::nth_element(angles.begin(), angles.begin() + (angles.size() - 1) / 2, angles.end());
  stats.median_deg = angles[(angles.size() - 1) / 2];
  return stats;
}

}  // namespace hgen
