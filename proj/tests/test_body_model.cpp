#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "shforge/body_model.hpp"
#include "shforge/toy.hpp"

using namespace shforge;
using namespace shforge::testing;

TEST_CASE("toy model satisfies every model invariant") {
  const BodyModelDef model = make_toy_model();  // validates internally
  CHECK(model.joint_count() == 24);
  CHECK(model.vertex_count() == 598);

  std::array<bool, kPartCount + 1> seen{};
  for (uint8_t label : model.part_labels) seen[label] = true;
  for (int p = 1; p <= kPartCount; ++p) CHECK(seen[p]);
}

TEST_CASE("model container roundtrip and rejection of malformed streams") {
  const BodyModelDef model = make_toy_model();

  std::stringstream buf;
  save_model(model, buf);
  const BodyModelDef loaded = load_model(buf);
  CHECK(loaded.joint_count() == model.joint_count());
  CHECK(loaded.vertex_count() == model.vertex_count());
  // Numeric payload is float32 in the container.
  CHECK((loaded.template_vertices - model.template_vertices).cwiseAbs().maxCoeff() <
        1e-6);
  CHECK(loaded.part_labels == model.part_labels);
  CHECK(loaded.kinematic_parents == model.kinematic_parents);

  SUBCASE("empty stream") {
    std::stringstream empty;
    CHECK(error_contains([&] { load_model(empty); }, "malformed model"));
  }
  SUBCASE("stream with a denormalized skinning row") {
    BodyModelDef broken = make_toy_model();
    broken.skinning_weights.row(7).setZero();
    broken.skinning_weights(7, 0) = 0.5;
    std::stringstream out;
    save_model(broken, out);  // serialization does not validate
    CHECK(error_contains([&] { load_model(out); },
                         "skinning weights row not normalized"));
  }
  SUBCASE("missing part label") {
    BodyModelDef broken = make_toy_model();
    for (uint8_t& label : broken.part_labels)
      if (label == kPartHead) label = kPartTorso;
    CHECK(error_contains([&] { broken.validate(); }, "part label missing: head"));
  }
  SUBCASE("cyclic kinematic tree") {
    BodyModelDef broken = make_toy_model();
    broken.kinematic_parents[1] = 4;  // 4's parent is 1
    CHECK(error_contains([&] { broken.validate(); }, "cycle"));
  }
}

TEST_CASE("apply_shape follows the blendshape sum exactly") {
  const BodyModelDef model = make_toy_model();

  ShapeCoefficients zero;
  CHECK(apply_shape(model, zero) == model.template_vertices);

  ShapeCoefficients e1;
  e1.beta[0] = 1.0;
  const Points3 shaped1 = apply_shape(model, e1);
  CHECK((shaped1 - (model.template_vertices + model.shape_blendshapes[0]))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  ShapeCoefficients mixed;
  mixed.beta[0] = 2.0;
  mixed.beta[1] = -1.0;
  const Points3 shaped = apply_shape(model, mixed);
  // Brute-force per-vertex, per-component sum.
  for (int i = 0; i < model.vertex_count(); ++i) {
    for (int c = 0; c < 3; ++c) {
      const double expected = model.template_vertices(i, c) +
                              2.0 * model.shape_blendshapes[0](i, c) -
                              model.shape_blendshapes[1](i, c);
      CHECK(shaped(i, c) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("apply_shape is linear in the coefficients") {
  const BodyModelDef model = make_toy_model();
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    ShapeCoefficients b1, b2, combo;
    const double a = rng.uniform(-2.0, 2.0);
    const double b = rng.uniform(-2.0, 2.0);
    for (int k = 0; k < kShapeCoeffCount; ++k) {
      b1.beta[k] = rng.uniform(-1.0, 1.0);
      b2.beta[k] = rng.uniform(-1.0, 1.0);
      combo.beta[k] = a * b1.beta[k] + b * b2.beta[k];
    }
    const Points3 lhs = apply_shape(model, combo);
    const Points3 rhs = model.template_vertices +
                        a * (apply_shape(model, b1) - model.template_vertices) +
                        b * (apply_shape(model, b2) - model.template_vertices);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("regress_joints is a convex combination of vertices") {
  const BodyModelDef toy = make_toy_model();

  SUBCASE("toy regressor reproduces the authored skeleton") {
    const Points3 joints = regress_joints(toy, toy.template_vertices);
    CHECK((joints - toy_rest_joints()).cwiseAbs().maxCoeff() < 1e-9);
  }

  SUBCASE("all mass on one vertex returns that vertex") {
    BodyModelDef model = toy;
    model.joint_regressor.row(0).setZero();
    model.joint_regressor(0, 42) = 1.0;
    const Points3 joints = regress_joints(model, model.template_vertices);
    CHECK((Vec3(joints.row(0)) - Vec3(model.template_vertices.row(42))).norm() ==
          0.0);
  }

  SUBCASE("commutes with translation") {
    const Vec3 t(0.3, -1.2, 2.5);
    const Points3 moved = toy.template_vertices.rowwise() + t.transpose();
    const Points3 a = regress_joints(toy, moved);
    const Points3 b = regress_joints(toy, toy.template_vertices).rowwise() + t.transpose();
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("forward kinematics") {
  const BodyModelDef model = make_toy_model();
  const Points3 rest = regress_joints(model, model.template_vertices);

  SUBCASE("identity pose gives identity transforms") {
    PoseFrame pose;
    pose.joint_rotations.assign(24, Vec3::Zero());
    const auto transforms = forward_kinematics(rest, pose, model.kinematic_parents);
    for (const Rigid& t : transforms) {
      CHECK((t.linear() - Mat3::Identity()).cwiseAbs().maxCoeff() == 0.0);
      CHECK(t.translation().norm() == 0.0);
    }
  }

  SUBCASE("root rotation rotates every joint about the root") {
    PoseFrame pose;
    pose.joint_rotations.assign(24, Vec3::Zero());
    pose.joint_rotations[0] = Vec3(0.0, 1.1, 0.0);
    const Mat3 r = rodrigues(pose.joint_rotations[0]);
    const auto transforms = forward_kinematics(rest, pose, model.kinematic_parents);
    const Vec3 root = rest.row(0);
    for (int j = 0; j < 24; ++j) {
      const Vec3 posed = transforms[j] * Vec3(rest.row(j));
      const Vec3 expected = r * (Vec3(rest.row(j)) - root) + root;
      CHECK((posed - expected).norm() < 1e-12);
    }
  }

  SUBCASE("two-link chain matches hand-computed composition") {
    // Rest joints on the x axis; both links rotated 90 degrees about z.
    // L1 about (1,0,0) sends (2,0,0) to (1,1,0); L0 about the origin sends
    // that to (-1,1,0).
    Points3 chain(3, 3);
    chain << 0, 0, 0, 1, 0, 0, 2, 0, 0;
    const std::vector<int> parents = {-1, 0, 1};
    PoseFrame pose;
    const double half_pi = std::numbers::pi / 2.0;
    pose.joint_rotations = {Vec3(0, 0, half_pi), Vec3(0, 0, half_pi),
                            Vec3::Zero()};
    const auto transforms = forward_kinematics(chain, pose, parents);
    const Vec3 end = transforms[2] * Vec3(chain.row(2));
    CHECK((end - Vec3(-1.0, 1.0, 0.0)).norm() < 1e-12);
  }

  SUBCASE("root translation moves the whole skeleton") {
    PoseFrame pose;
    pose.joint_rotations.assign(24, Vec3::Zero());
    pose.root_translation = Vec3(0.5, 0.25, -1.0);
    const auto transforms = forward_kinematics(rest, pose, model.kinematic_parents);
    const Points3 posed = pose_joints(rest, transforms);
    const Points3 expected = rest.rowwise() + pose.root_translation.transpose();
    CHECK((posed - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("linear blend skinning") {
  const BodyModelDef model = make_toy_model();
  const Points3 rest = model.template_vertices;
  const Points3 rest_joints = regress_joints(model, rest);

  SUBCASE("identity transforms are the identity on vertices") {
    const std::vector<Rigid> identity(24, Rigid::Identity());
    CHECK(skin(model, rest, identity) == rest);
  }

  SUBCASE("a common rigid transform moves every vertex rigidly") {
    Rng rng(3);
    const Rigid g = random_rigid(rng);
    const std::vector<Rigid> all_g(24, g);
    const Points3 posed = skin(model, rest, all_g);
    for (int i = 0; i < model.vertex_count(); ++i) {
      const Vec3 expected = g * Vec3(rest.row(i));
      CHECK((Vec3(posed.row(i)) - expected).norm() < 1e-12);
    }
  }

  SUBCASE("hand-computed two-joint blend") {
    // One vertex split 0.5/0.5 between a unit x translation and identity.
    BodyModelDef tiny = model;
    tiny.skinning_weights.row(0).setZero();
    tiny.skinning_weights(0, 0) = 0.5;
    tiny.skinning_weights(0, 1) = 0.5;
    std::vector<Rigid> transforms(24, Rigid::Identity());
    transforms[0] = Eigen::Translation3d(1.0, 0.0, 0.0) * Rigid::Identity();
    const Points3 posed = skin(tiny, rest, transforms);
    const Vec3 expected = Vec3(rest.row(0)) + Vec3(0.5, 0.0, 0.0);
    CHECK((Vec3(posed.row(0)) - expected).norm() < 1e-12);
  }

  SUBCASE("rigid equivariance on random poses") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
      const PoseFrame pose = random_pose(rng, 24);
      const auto transforms =
          forward_kinematics(rest_joints, pose, model.kinematic_parents);
      const Rigid g = random_rigid(rng);
      std::vector<Rigid> composed(transforms.size());
      for (size_t j = 0; j < transforms.size(); ++j) composed[j] = g * transforms[j];

      const Points3 direct = skin(model, rest, composed);
      Points3 expected = skin(model, rest, transforms);
      for (int i = 0; i < expected.rows(); ++i)
        expected.row(i) = g * Vec3(expected.row(i));

      const double scale = expected.cwiseAbs().maxCoeff();
      CHECK((direct - expected).cwiseAbs().maxCoeff() < 1e-6 * std::max(1.0, scale));
    }
  }
}
