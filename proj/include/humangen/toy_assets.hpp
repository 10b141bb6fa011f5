#pragma once

#include <string>
#include <vector>

#include "humangen/body_model.hpp"
#include "humangen/rng.hpp"
#include "humangen/scene.hpp"

namespace hgen {

/// Procedurally built capsule-limb figure: ~200 vertices, 5 joints (pelvis,
/// spine, head, left_arm, right_arm), two shape channels (height, girth) and
/// one expression channel. Stands on y=0, meters, y-up.
BodyModel make_toy_body();

/// One pose/shape draw from a motion source, with optional prompt metadata.
struct MotionRecord {
  Eigen::VectorXd betas;
  Eigen::VectorXd psi;
  Points3 thetas;
  std::string gender;  // empty = decide at prompt time
  std::string action;
};

/// Hand-built strongly asymmetric poses (leaning bodies, one arm raised).
/// Their silhouettes overlap their mirror images poorly, which is what the
/// mirror-generation filter tests need.
std::vector<MotionRecord> fixture_motions(const BodyModel& model);

/// Random small-perturbation pose for pipeline runs without a motion file.
MotionRecord sample_procedural_motion(const BodyModel& model, Rng& rng);

std::vector<MotionRecord> load_motions(const std::string& path, const BodyModel& model);
void save_motions(const std::vector<MotionRecord>& motions, const std::string& path);

/// 6x6x3 m room: labeled floor grid, four walls, two furniture boxes. Label
/// classes: floor, wall, furniture.
LabeledSceneMesh make_fixture_room();

/// Writes the demo asset set (toy body, fixture room, fixture motions,
/// prompt tables, default run config) under dir.
void write_demo_assets(const std::string& dir);

}  // namespace hgen
