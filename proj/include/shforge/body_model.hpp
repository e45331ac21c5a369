#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "shforge/types.hpp"

namespace shforge {

// Per-vertex body part labels. 0 is reserved for background in rendered
// label maps.
enum BodyPartLabel : uint8_t {
  kPartHead = 1,
  kPartTorso = 2,
  kPartRightUpperLeg = 3,
  kPartLeftUpperLeg = 4,
  kPartRightLowerLeg = 5,
  kPartLeftLowerLeg = 6,
  kPartRightUpperArm = 7,
  kPartLeftUpperArm = 8,
  kPartRightLowerArm = 9,
  kPartLeftLowerArm = 10,
  kPartRightHand = 11,
  kPartLeftHand = 12,
  kPartRightFoot = 13,
  kPartLeftFoot = 14,
};

const char* part_name(int label);

struct ShapeCoefficients {
  std::array<double, kShapeCoeffCount> beta{};

  void validate() const;  // finite, |beta_k| <= 5
};

struct PoseFrame {
  Vec3 root_translation = Vec3::Zero();
  std::vector<Vec3> joint_rotations;  // axis-angle, radians

  int joint_count() const { return static_cast<int>(joint_rotations.size()); }
  void validate() const;  // finite, axis-angle magnitude <= 2*pi
};

/// Articulated parametric body: template mesh, shape blendshapes, joint
/// regressor and skinning weights over a single-rooted kinematic tree.
struct BodyModelDef {
  Points3 template_vertices;               // V x 3, rest pose, meters
  FaceIndices faces;                       // F x 3
  std::vector<Points3> shape_blendshapes;  // K offset fields, each V x 3
  Eigen::MatrixXd joint_regressor;         // J x V, rows sum to 1
  Eigen::MatrixXd skinning_weights;        // V x J, rows sum to 1
  std::vector<int> kinematic_parents;      // J entries, root marked -1
  std::vector<uint8_t> part_labels;        // V entries in 1..14
  Points2 uv_coords;                       // V x 2 in [0,1]^2

  int vertex_count() const { return static_cast<int>(template_vertices.rows()); }
  int joint_count() const { return static_cast<int>(kinematic_parents.size()); }
  int face_count() const { return static_cast<int>(faces.rows()); }
  int shape_count() const { return static_cast<int>(shape_blendshapes.size()); }

  /// Throws Error naming the first violated invariant.
  void validate() const;
};

/// Reads the "sh-forge-model/1" container: JSON with base64-embedded
/// little-endian float32 arrays for the numeric blocks and plain integer
/// arrays for faces, parents and part labels. Validates all invariants.
BodyModelDef load_model(std::istream& in);
void save_model(const BodyModelDef& model, std::ostream& out);

Mat3 rodrigues(const Vec3& axis_angle);

/// rest_i = template_i + sum_k beta_k * blendshape_{k,i}
Points3 apply_shape(const BodyModelDef& model, const ShapeCoefficients& beta);

/// joint_j = sum_i regressor_{j,i} * vertex_i
Points3 regress_joints(const BodyModelDef& model, const Points3& rest_vertices);

/// World transforms mapping rest-pose space to posed space. Each joint
/// rotates about its rest position; the chain composes root-to-leaf and the
/// root transform carries the root translation.
std::vector<Rigid> forward_kinematics(const Points3& rest_joints,
                                      const PoseFrame& pose,
                                      std::span<const int> parents);

/// Linear blend skinning: v'_i = sum_j w_ij * (T_j applied to v_i).
Points3 skin(const BodyModelDef& model, const Points3& rest_vertices,
             std::span<const Rigid> transforms);

/// Posed joint positions (joint j maps with its own transform).
Points3 pose_joints(const Points3& rest_joints, std::span<const Rigid> transforms);

}  // namespace shforge
