#include "shforge/toy.hpp"

#include <array>
#include <cmath>

namespace shforge {

namespace {

constexpr int kJoints = 24;
constexpr int kBones = 23;
constexpr int kRingsPerBone = 4;
constexpr int kRingVerts = 6;
constexpr int kVertsPerBone = kRingsPerBone * kRingVerts + 2;  // + two caps

// clang-format off
constexpr double kJointPos[kJoints][3] = {
    { 0.00, 0.95, 0.00},  //  0 pelvis
    { 0.09, 0.91, 0.00},  //  1 left hip
    {-0.09, 0.91, 0.00},  //  2 right hip
    { 0.00, 1.06, 0.00},  //  3 spine1
    { 0.10, 0.52, 0.00},  //  4 left knee
    {-0.10, 0.52, 0.00},  //  5 right knee
    { 0.00, 1.18, 0.00},  //  6 spine2
    { 0.11, 0.09, 0.00},  //  7 left ankle
    {-0.11, 0.09, 0.00},  //  8 right ankle
    { 0.00, 1.30, 0.00},  //  9 spine3
    { 0.11, 0.03, 0.08},  // 10 left foot
    {-0.11, 0.03, 0.08},  // 11 right foot
    { 0.00, 1.43, 0.00},  // 12 neck
    { 0.06, 1.38, 0.00},  // 13 left collar
    {-0.06, 1.38, 0.00},  // 14 right collar
    { 0.00, 1.58, 0.00},  // 15 head
    { 0.18, 1.40, 0.00},  // 16 left shoulder
    {-0.18, 1.40, 0.00},  // 17 right shoulder
    { 0.44, 1.39, 0.00},  // 18 left elbow
    {-0.44, 1.39, 0.00},  // 19 right elbow
    { 0.69, 1.38, 0.00},  // 20 left wrist
    {-0.69, 1.38, 0.00},  // 21 right wrist
    { 0.78, 1.38, 0.00},  // 22 left hand
    {-0.78, 1.38, 0.00},  // 23 right hand
};

constexpr int kParents[kJoints] = {
    -1, 0, 0, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 9, 9, 12, 13, 14, 16, 17, 18, 19, 20, 21};

struct BoneSpec {
  int child;      // bone runs parent(child) -> child
  double radius;
  uint8_t label;
};

constexpr BoneSpec kBoneTable[kBones] = {
    { 1, 0.070, kPartTorso},
    { 2, 0.070, kPartTorso},
    { 3, 0.100, kPartTorso},
    { 4, 0.060, kPartLeftUpperLeg},
    { 5, 0.060, kPartRightUpperLeg},
    { 6, 0.100, kPartTorso},
    { 7, 0.050, kPartLeftLowerLeg},
    { 8, 0.050, kPartRightLowerLeg},
    { 9, 0.100, kPartTorso},
    {10, 0.025, kPartLeftFoot},
    {11, 0.025, kPartRightFoot},
    {12, 0.050, kPartTorso},
    {13, 0.050, kPartTorso},
    {14, 0.050, kPartTorso},
    {15, 0.085, kPartHead},
    {16, 0.050, kPartTorso},
    {17, 0.050, kPartTorso},
    {18, 0.042, kPartLeftUpperArm},
    {19, 0.042, kPartRightUpperArm},
    {20, 0.035, kPartLeftLowerArm},
    {21, 0.035, kPartRightLowerArm},
    {22, 0.028, kPartLeftHand},
    {23, 0.028, kPartRightHand},
};
// clang-format on

// Hexagonal cross-section with exactly cancelling offsets, so the mean of a
// ring equals its centre to machine precision.
const double kHexCos[kRingVerts] = {1.0, 0.5, -0.5, -1.0, -0.5, 0.5};
const double kHexSin[kRingVerts] = {0.0,  0.8660254037844386,
                                    0.8660254037844386,  0.0,
                                    -0.8660254037844386, -0.8660254037844386};

// Blend toward the child joint over the last 40% of the bone, topping out at
// an even split right at the joint.
double child_weight(double t) {
  return t <= 0.6 ? 0.0 : 0.5 * (t - 0.6) / 0.4;
}

}  // namespace

Points3 toy_rest_joints() {
  Points3 joints(kJoints, 3);
  for (int j = 0; j < kJoints; ++j)
    joints.row(j) = Vec3(kJointPos[j][0], kJointPos[j][1], kJointPos[j][2]);
  return joints;
}

const std::vector<int>& toy_parent_table() {
  static const std::vector<int> parents(kParents, kParents + kJoints);
  return parents;
}

BodyModelDef make_toy_model() {
  const Points3 joints = toy_rest_joints();
  const int total_verts = kBones * kVertsPerBone;

  BodyModelDef model;
  model.template_vertices.resize(total_verts, 3);
  model.uv_coords.resize(total_verts, 2);
  model.part_labels.resize(total_verts);
  model.kinematic_parents = toy_parent_table();
  model.skinning_weights = Eigen::MatrixXd::Zero(total_verts, kJoints);
  model.joint_regressor = Eigen::MatrixXd::Zero(kJoints, total_verts);

  std::vector<int32_t> faces;
  faces.reserve(kBones * 48 * 3);
  auto push_face = [&faces](int a, int b, int c) {
    faces.push_back(a);
    faces.push_back(b);
    faces.push_back(c);
  };

  for (int bone = 0; bone < kBones; ++bone) {
    const BoneSpec& spec = kBoneTable[bone];
    const int parent = kParents[spec.child];
    const Vec3 a = joints.row(parent);
    const Vec3 b = joints.row(spec.child);
    const Vec3 axis = (b - a).normalized();

    const Vec3 ref = std::abs(axis.y()) < 0.9 ? Vec3::UnitY() : Vec3::UnitX();
    const Vec3 u = ref.cross(axis).normalized();
    const Vec3 v = axis.cross(u);

    const int base = bone * kVertsPerBone;
    for (int ring = 0; ring < kRingsPerBone; ++ring) {
      const double t = static_cast<double>(ring) / (kRingsPerBone - 1);
      const Vec3 center = a + t * (b - a);
      const double wc = child_weight(t);
      for (int k = 0; k < kRingVerts; ++k) {
        const int idx = base + ring * kRingVerts + k;
        const Vec3 offset = spec.radius * (kHexCos[k] * u + kHexSin[k] * v);
        model.template_vertices.row(idx) = center + offset;
        model.uv_coords.row(idx) =
            Vec2(static_cast<double>(k) / kRingVerts, (bone + t) / kBones);
        model.part_labels[idx] = spec.label;
        model.skinning_weights(idx, parent) = 1.0 - wc;
        if (wc > 0.0) model.skinning_weights(idx, spec.child) = wc;
      }
    }

    // Rounded end caps, pushed slightly past the joints.
    const int cap_a = base + kRingsPerBone * kRingVerts;
    const int cap_b = cap_a + 1;
    model.template_vertices.row(cap_a) = a - 0.6 * spec.radius * axis;
    model.template_vertices.row(cap_b) = b + 0.6 * spec.radius * axis;
    model.uv_coords.row(cap_a) = Vec2(0.5, static_cast<double>(bone) / kBones);
    model.uv_coords.row(cap_b) = Vec2(0.5, static_cast<double>(bone + 1) / kBones);
    model.part_labels[cap_a] = spec.label;
    model.part_labels[cap_b] = spec.label;
    model.skinning_weights(cap_a, parent) = 1.0;
    model.skinning_weights(cap_b, parent) = 0.5;
    model.skinning_weights(cap_b, spec.child) = 0.5;

    for (int ring = 0; ring + 1 < kRingsPerBone; ++ring) {
      const int r0 = base + ring * kRingVerts;
      const int r1 = r0 + kRingVerts;
      for (int k = 0; k < kRingVerts; ++k) {
        const int k2 = (k + 1) % kRingVerts;
        push_face(r0 + k, r0 + k2, r1 + k2);
        push_face(r0 + k, r1 + k2, r1 + k);
      }
    }
    const int first_ring = base;
    const int last_ring = base + (kRingsPerBone - 1) * kRingVerts;
    for (int k = 0; k < kRingVerts; ++k) {
      const int k2 = (k + 1) % kRingVerts;
      push_face(cap_a, first_ring + k2, first_ring + k);
      push_face(cap_b, last_ring + k, last_ring + k2);
    }

    // One regressor ring per joint: the base ring of the spine bone for the
    // pelvis, the end ring of the parent bone for everything else.
    for (int k = 0; k < kRingVerts; ++k)
      model.joint_regressor(spec.child, last_ring + k) = 1.0 / kRingVerts;
    if (spec.child == 3) {
      for (int k = 0; k < kRingVerts; ++k)
        model.joint_regressor(0, first_ring + k) = 1.0 / kRingVerts;
    }
  }

  model.faces.resize(static_cast<int>(faces.size()) / 3, 3);
  std::copy(faces.begin(), faces.end(), model.faces.data());

  // Analytic shape offsets: overall size, girth, height, then a few bending
  // patterns. Values are arbitrary but fixed; tests treat them as data.
  const Vec3 pelvis = joints.row(0);
  model.shape_blendshapes.assign(kShapeCoeffCount, Points3::Zero(total_verts, 3));
  for (int i = 0; i < total_verts; ++i) {
    const Vec3 p = model.template_vertices.row(i);
    model.shape_blendshapes[0].row(i) = 0.10 * (p - pelvis);
    model.shape_blendshapes[1].row(i) =
        Vec3(0.08 * (p.x() - pelvis.x()), 0.0, 0.08 * (p.z() - pelvis.z()));
    model.shape_blendshapes[2].row(i) = Vec3(0.0, 0.08 * p.y(), 0.0);
    for (int k = 3; k < kShapeCoeffCount; ++k) {
      Vec3 dir = Vec3::Zero();
      dir[k % 3] = 1.0;
      model.shape_blendshapes[k].row(i) =
          0.015 * std::sin((2.0 + k) * p.y() + k) * dir;
    }
  }

  model.validate();
  return model;
}

}  // namespace shforge
