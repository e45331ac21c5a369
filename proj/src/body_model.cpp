#include "shforge/body_model.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "shforge/base64.hpp"
#include "shforge/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "model container assumes a little-endian host");

namespace shforge {

using nlohmann::json;

const char* part_name(int label) {
  static const char* names[] = {
      "background",      "head",           "torso",          "right_upper_leg",
      "left_upper_leg",  "right_lower_leg", "left_lower_leg", "right_upper_arm",
      "left_upper_arm",  "right_lower_arm", "left_lower_arm", "right_hand",
      "left_hand",       "right_foot",     "left_foot"};
  require(label >= 0 && label <= kPartCount, "part label out of range");
  return names[label];
}

void ShapeCoefficients::validate() const {
  for (double b : beta) {
    require(std::isfinite(b), "shape coefficient not finite");
    require(std::abs(b) <= 5.0, "shape coefficient magnitude exceeds 5");
  }
}

void PoseFrame::validate() const {
  require(root_translation.allFinite(), "non-finite pose: root translation");
  for (const Vec3& r : joint_rotations) {
    require(r.allFinite(), "non-finite pose: joint rotation");
    require(r.norm() <= 2.0 * std::numbers::pi + 1e-12,
            "pose rotation magnitude exceeds 2*pi");
  }
}

void BodyModelDef::validate() const {
  const int v = vertex_count();
  const int j = joint_count();
  require(v > 0, "malformed model: no vertices");
  require(j > 0, "malformed model: no joints");
  require(face_count() > 0, "malformed model: no faces");

  for (int f = 0; f < face_count(); ++f)
    for (int k = 0; k < 3; ++k)
      require(faces(f, k) >= 0 && faces(f, k) < v, "face index out of range");

  // Kinematic graph: exactly one root, parents in range, acyclic, single tree.
  int roots = 0;
  for (int p : kinematic_parents) {
    if (p < 0) {
      ++roots;
    } else {
      require(p < j, "parent index out of range");
    }
  }
  require(roots == 1, "kinematic tree must have exactly one root");
  for (int start = 0; start < j; ++start) {
    int node = start;
    int steps = 0;
    while (kinematic_parents[node] >= 0) {
      node = kinematic_parents[node];
      require(++steps <= j, "kinematic tree contains a cycle");
    }
  }

  require(joint_regressor.rows() == j && joint_regressor.cols() == v,
          "joint regressor shape mismatch");
  for (int r = 0; r < j; ++r) {
    double sum = 0.0;
    for (int c = 0; c < v; ++c) {
      require(joint_regressor(r, c) >= 0.0, "joint regressor weight negative");
      sum += joint_regressor(r, c);
    }
    require(std::abs(sum - 1.0) <= 1e-6, "joint regressor row not normalized");
  }

  require(skinning_weights.rows() == v && skinning_weights.cols() == j,
          "skinning weights shape mismatch");
  for (int r = 0; r < v; ++r) {
    double sum = 0.0;
    for (int c = 0; c < j; ++c) {
      require(skinning_weights(r, c) >= 0.0, "skinning weight negative");
      sum += skinning_weights(r, c);
    }
    require(std::abs(sum - 1.0) <= 1e-6, "skinning weights row not normalized");
  }

  require(static_cast<int>(part_labels.size()) == v, "part labels size mismatch");
  std::array<bool, kPartCount + 1> seen{};
  for (uint8_t label : part_labels) {
    require(label >= 1 && label <= kPartCount, "part label out of range");
    seen[label] = true;
  }
  for (int p = 1; p <= kPartCount; ++p)
    require(seen[p], std::string("part label missing: ") + part_name(p));

  require(uv_coords.rows() == v, "uv coords size mismatch");
  for (int r = 0; r < v; ++r)
    for (int c = 0; c < 2; ++c)
      require(uv_coords(r, c) >= 0.0 && uv_coords(r, c) <= 1.0,
              "uv coordinate outside [0,1]");

  for (const Points3& s : shape_blendshapes)
    require(s.rows() == v, "blendshape size mismatch");
  require(static_cast<int>(shape_blendshapes.size()) == kShapeCoeffCount,
          "expected 10 shape blendshapes");
}

namespace {

std::string pack_f32(const double* data, size_t count) {
  std::vector<uint8_t> bytes(count * 4);
  for (size_t i = 0; i < count; ++i) {
    const float f = static_cast<float>(data[i]);
    std::memcpy(bytes.data() + i * 4, &f, 4);
  }
  return base64_encode(bytes);
}

void unpack_f32(const json& node, double* out, size_t count, const char* what) {
  require(node.is_string(), std::string("malformed model: ") + what +
                                " must be a base64 string");
  const std::vector<uint8_t> bytes =
      base64_decode(node.get_ref<const std::string&>());
  require(bytes.size() == count * 4,
          std::string("malformed model: ") + what + " has wrong length");
  for (size_t i = 0; i < count; ++i) {
    float f;
    std::memcpy(&f, bytes.data() + i * 4, 4);
    out[i] = static_cast<double>(f);
  }
}

}  // namespace

BodyModelDef load_model(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed model: ") + e.what());
  }
  require(doc.is_object(), "malformed model: not a JSON object");
  require(doc.value("version", "") == "sh-forge-model/1",
          "malformed model: unsupported version");

  BodyModelDef model;
  try {
    const int v = doc.at("vertex_count").get<int>();
    const int f = doc.at("face_count").get<int>();
    const int j = doc.at("joint_count").get<int>();
    const int k = doc.at("shape_count").get<int>();
    require(v > 0 && f > 0 && j > 0 && k >= 0, "malformed model: bad counts");

    model.template_vertices.resize(v, 3);
    unpack_f32(doc.at("template_vertices"), model.template_vertices.data(),
               static_cast<size_t>(v) * 3, "template_vertices");

    const auto faces = doc.at("faces").get<std::vector<int32_t>>();
    require(static_cast<int>(faces.size()) == f * 3,
            "malformed model: faces has wrong length");
    model.faces.resize(f, 3);
    std::memcpy(model.faces.data(), faces.data(), faces.size() * 4);

    model.shape_blendshapes.resize(k);
    const json& blend = doc.at("shape_blendshapes");
    require(blend.is_array() && static_cast<int>(blend.size()) == k,
            "malformed model: shape_blendshapes has wrong length");
    for (int s = 0; s < k; ++s) {
      model.shape_blendshapes[s].resize(v, 3);
      unpack_f32(blend[s], model.shape_blendshapes[s].data(),
                 static_cast<size_t>(v) * 3, "shape_blendshapes");
    }

    model.joint_regressor.resize(j, v);
    unpack_f32(doc.at("joint_regressor"), model.joint_regressor.data(),
               static_cast<size_t>(j) * v, "joint_regressor");
    model.skinning_weights.resize(v, j);
    unpack_f32(doc.at("skinning_weights"), model.skinning_weights.data(),
               static_cast<size_t>(v) * j, "skinning_weights");

    model.kinematic_parents = doc.at("kinematic_parents").get<std::vector<int>>();
    require(static_cast<int>(model.kinematic_parents.size()) == j,
            "malformed model: kinematic_parents has wrong length");

    const auto labels = doc.at("part_labels").get<std::vector<int>>();
    require(static_cast<int>(labels.size()) == v,
            "malformed model: part_labels has wrong length");
    model.part_labels.assign(labels.begin(), labels.end());

    model.uv_coords.resize(v, 2);
    unpack_f32(doc.at("uv_coords"), model.uv_coords.data(),
               static_cast<size_t>(v) * 2, "uv_coords");
  } catch (const json::exception& e) {
    throw Error(std::string("malformed model: ") + e.what());
  }

  model.validate();
  return model;
}

void save_model(const BodyModelDef& model, std::ostream& out) {
  const int v = model.vertex_count();
  const int j = model.joint_count();

  json doc;
  doc["version"] = "sh-forge-model/1";
  doc["vertex_count"] = v;
  doc["face_count"] = model.face_count();
  doc["joint_count"] = j;
  doc["shape_count"] = model.shape_count();
  doc["template_vertices"] =
      pack_f32(model.template_vertices.data(), static_cast<size_t>(v) * 3);
  doc["faces"] = std::vector<int32_t>(
      model.faces.data(), model.faces.data() + model.faces.size());
  json blend = json::array();
  for (const Points3& s : model.shape_blendshapes)
    blend.push_back(pack_f32(s.data(), static_cast<size_t>(v) * 3));
  doc["shape_blendshapes"] = std::move(blend);
  doc["joint_regressor"] =
      pack_f32(model.joint_regressor.data(), static_cast<size_t>(j) * v);
  doc["skinning_weights"] =
      pack_f32(model.skinning_weights.data(), static_cast<size_t>(v) * j);
  doc["kinematic_parents"] = model.kinematic_parents;
  doc["part_labels"] =
      std::vector<int>(model.part_labels.begin(), model.part_labels.end());
  doc["uv_coords"] = pack_f32(model.uv_coords.data(), static_cast<size_t>(v) * 2);
  out << doc.dump(2) << '\n';
}

Mat3 rodrigues(const Vec3& axis_angle) {
  const double angle = axis_angle.norm();
  if (angle < 1e-12) return Mat3::Identity();
  return Eigen::AngleAxisd(angle, axis_angle / angle).toRotationMatrix();
}

Points3 apply_shape(const BodyModelDef& model, const ShapeCoefficients& beta) {
  beta.validate();
  Points3 rest = model.template_vertices;
  for (int k = 0; k < model.shape_count(); ++k)
    if (beta.beta[k] != 0.0) rest += beta.beta[k] * model.shape_blendshapes[k];
  return rest;
}

Points3 regress_joints(const BodyModelDef& model, const Points3& rest_vertices) {
  require(rest_vertices.rows() == model.vertex_count(),
          "regress_joints: vertex count mismatch");
  return model.joint_regressor * rest_vertices;
}

std::vector<Rigid> forward_kinematics(const Points3& rest_joints,
                                      const PoseFrame& pose,
                                      std::span<const int> parents) {
  const int j = static_cast<int>(parents.size());
  require(rest_joints.rows() == j, "forward_kinematics: joint count mismatch");
  require(pose.joint_count() == j, "forward_kinematics: pose joint count mismatch");
  pose.validate();

  std::vector<Rigid> world(j, Rigid::Identity());
  std::vector<bool> done(j, false);

  // Resolve in dependency order; parents may appear after children in the
  // table, so sweep until every node is placed.
  int placed = 0;
  while (placed < j) {
    const int before = placed;
    for (int i = 0; i < j; ++i) {
      if (done[i]) continue;
      const int parent = parents[i];
      if (parent >= 0 && !done[parent]) continue;

      const Vec3 pivot = rest_joints.row(i);
      Rigid local = Eigen::Translation3d(pivot) *
                    Rigid(rodrigues(pose.joint_rotations[i])) *
                    Eigen::Translation3d(-pivot);
      if (parent < 0) {
        world[i] = Eigen::Translation3d(pose.root_translation) * local;
      } else {
        world[i] = world[parent] * local;
      }
      done[i] = true;
      ++placed;
    }
    require(placed > before, "forward_kinematics: unreachable joints");
  }
  return world;
}

Points3 skin(const BodyModelDef& model, const Points3& rest_vertices,
             std::span<const Rigid> transforms) {
  const int v = model.vertex_count();
  const int j = model.joint_count();
  require(rest_vertices.rows() == v, "skin: vertex count mismatch");
  require(static_cast<int>(transforms.size()) == j, "skin: transform count mismatch");

  Points3 posed(v, 3);
  for (int i = 0; i < v; ++i) {
    const Vec3 p = rest_vertices.row(i);
    Vec3 acc = Vec3::Zero();
    for (int t = 0; t < j; ++t) {
      const double w = model.skinning_weights(i, t);
      if (w != 0.0) acc += w * (transforms[t] * p);
    }
    posed.row(i) = acc;
  }
  return posed;
}

Points3 pose_joints(const Points3& rest_joints, std::span<const Rigid> transforms) {
  require(rest_joints.rows() == static_cast<Eigen::Index>(transforms.size()),
          "pose_joints: joint count mismatch");
  Points3 out(rest_joints.rows(), 3);
  for (Eigen::Index i = 0; i < rest_joints.rows(); ++i)
    out.row(i) = transforms[i] * Vec3(rest_joints.row(i));
  return out;
}

}  // namespace shforge
