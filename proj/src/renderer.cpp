#include "shforge/renderer.hpp"

#include <algorithm>
#include <cmath>

#include "shforge/error.hpp"
#include "shforge/sh.hpp"

namespace shforge {

namespace {

constexpr double kTinyNormal = 1e-12;

std::array<double, 3> sample_albedo(const ImageU8& texture, double u, double v) {
  const int x = std::clamp(static_cast<int>(u * texture.width()), 0,
                           texture.width() - 1);
  const int y = std::clamp(static_cast<int>(v * texture.height()), 0,
                           texture.height() - 1);
  return {texture.at(x, y, 0) / 255.0, texture.at(x, y, 1) / 255.0,
          texture.at(x, y, 2) / 255.0};
}

}  // namespace

std::vector<uint8_t> face_part_labels(const BodyModelDef& model) {
  std::vector<uint8_t> labels(static_cast<size_t>(model.face_count()));
  for (int f = 0; f < model.face_count(); ++f) {
    uint8_t l[3];
    for (int k = 0; k < 3; ++k) l[k] = model.part_labels[model.faces(f, k)];
    uint8_t label;
    if (l[0] == l[1] || l[0] == l[2]) {
      label = l[0];
    } else if (l[1] == l[2]) {
      label = l[1];
    } else {
      label = std::min({l[0], l[1], l[2]});
    }
    labels[static_cast<size_t>(f)] = label;
  }
  return labels;
}

Points3 vertex_normals(const Points3& vertices, const FaceIndices& faces) {
  Points3 normals = Points3::Zero(vertices.rows(), 3);
  for (Eigen::Index f = 0; f < faces.rows(); ++f) {
    const Vec3 a = vertices.row(faces(f, 0));
    const Vec3 b = vertices.row(faces(f, 1));
    const Vec3 c = vertices.row(faces(f, 2));
    const Vec3 weighted = (b - a).cross(c - a);  // length = 2x face area
    for (int k = 0; k < 3; ++k) normals.row(faces(f, k)) += weighted;
  }
  for (Eigen::Index i = 0; i < normals.rows(); ++i) {
    const double len = normals.row(i).norm();
    if (len > kTinyNormal) normals.row(i) /= len;
  }
  return normals;
}

ImageU8 composite(const ImageU8& body_rgb, const GeometryBuffers& geom,
                  const ImageU8& background) {
  require(body_rgb.width() == geom.width && body_rgb.height() == geom.height,
          "composite: body image size mismatch");
  require(background.width() == geom.width && background.height() == geom.height,
          "composite: background not sized to the viewport");
  require(body_rgb.channels() == 3 && background.channels() == 3,
          "composite: expected RGB images");

  ImageU8 out = body_rgb;
  for (int y = 0; y < geom.height; ++y)
    for (int x = 0; x < geom.width; ++x)
      if (!geom.covered(x, y))
        for (int c = 0; c < 3; ++c) out.at(x, y, c) = background.at(x, y, c);
  return out;
}

ImageF32 render_flow(const GeometryBuffers& geom_t, const Points3& cam_verts_t,
                     const Points3& cam_verts_t1, const FaceIndices& faces,
                     const CameraIntrinsics& intr) {
  require(cam_verts_t.rows() == cam_verts_t1.rows(),
          "render_flow: meshes must share topology");

  ImageF32 flow(geom_t.width, geom_t.height, 2, 0.0f);
  for (int y = 0; y < geom_t.height; ++y) {
    for (int x = 0; x < geom_t.width; ++x) {
      const size_t idx = geom_t.pixel_index(x, y);
      const int32_t f = geom_t.face_id[idx];
      if (f < 0) continue;
      const double* b = &geom_t.bary[idx * 3];
      Vec3 p0 = Vec3::Zero(), p1 = Vec3::Zero();
      for (int k = 0; k < 3; ++k) {
        const int32_t vi = faces(f, k);
        p0 += b[k] * Vec3(cam_verts_t.row(vi));
        p1 += b[k] * Vec3(cam_verts_t1.row(vi));
      }
      const Projection q0 = project_camera_point(intr, p0);
      const Projection q1 = project_camera_point(intr, p1);
      if (q0.behind || q1.behind) continue;
      flow.at(x, y, 0) = static_cast<float>(q1.u - q0.u);
      flow.at(x, y, 1) = static_cast<float>(q1.v - q0.v);
    }
  }
  return flow;
}

ClipRenderer::ClipRenderer(const BodyModelDef& model, const SceneConfig& scene,
                           const AssetBanks& banks, const CameraIntrinsics& intr,
                           std::span<const PoseFrame> frames)
    : model_(model), scene_(scene), intr_(intr) {
  require(!frames.empty(), "ClipRenderer: no frames");
  validate_scene(scene, banks);

  texture_ = &banks.textures[static_cast<size_t>(scene.texture_id)].image;
  background_ = resize_cover(banks.backgrounds[static_cast<size_t>(scene.background_id)],
                             intr.width, intr.height);
  face_labels_ = face_part_labels(model);

  const Points3 rest_vertices = apply_shape(model, scene.shape);
  const Points3 rest_joints = regress_joints(model, rest_vertices);

  posed_vertices_.reserve(frames.size());
  posed_joints_.reserve(frames.size());
  for (const PoseFrame& pose : frames) {
    const auto transforms =
        forward_kinematics(rest_joints, pose, model.kinematic_parents);
    posed_vertices_.push_back(skin(model, rest_vertices, transforms));
    posed_joints_.push_back(pose_joints(rest_joints, transforms));
  }

  // The camera is aimed at the first frame's pelvis and stays fixed.
  const Vec3 pelvis0 = posed_joints_.front().row(0);
  camera_ = place_camera(pelvis0, scene.camera_distance, scene.camera_yaw);
}

double ClipRenderer::pelvis_depth(int t) const {
  return camera_.to_camera(posed_joints_[static_cast<size_t>(t)].row(0)).z();
}

FramePasses ClipRenderer::render_frame(int t) const {
  require(t >= 0 && t < frame_count(), "frame index out of range");
  const Points3& world = posed_vertices_[static_cast<size_t>(t)];

  Points3 cam(world.rows(), 3);
  for (Eigen::Index i = 0; i < world.rows(); ++i)
    cam.row(i) = camera_.to_camera(world.row(i));

  const GeometryBuffers geom = rasterize_camera_space(cam, model_.faces, intr_);
  const Points3 normals_world = vertex_normals(world, model_.faces);

  FramePasses out;
  out.rgb = ImageU8(geom.width, geom.height, 3);
  out.depth_m = ImageF32(geom.width, geom.height, 1, kDepthSentinel);
  out.segm = ImageU8(geom.width, geom.height, 1, 0);
  out.normals = ImageF32(geom.width, geom.height, 3, 0.0f);

  for (int y = 0; y < geom.height; ++y) {
    for (int x = 0; x < geom.width; ++x) {
      const size_t idx = geom.pixel_index(x, y);
      const int32_t f = geom.face_id[idx];
      if (f < 0) continue;
      const double* b = &geom.bary[idx * 3];

      out.depth_m.at(x, y) = static_cast<float>(geom.depth[idx]);
      out.segm.at(x, y) = face_labels_[static_cast<size_t>(f)];

      Vec3 n = Vec3::Zero();
      Vec2 uv = Vec2::Zero();
      for (int k = 0; k < 3; ++k) {
        const int32_t vi = model_.faces(f, k);
        n += b[k] * Vec3(normals_world.row(vi));
        uv += b[k] * Vec2(model_.uv_coords.row(vi));
      }
      if (n.norm() < kTinyNormal) {
        // Degenerate interpolation; fall back to the geometric face normal.
        const Vec3 va = world.row(model_.faces(f, 0));
        const Vec3 vb = world.row(model_.faces(f, 1));
        const Vec3 vc = world.row(model_.faces(f, 2));
        n = (vb - va).cross(vc - va);
      }
      n.normalize();

      const Vec3 n_cam = camera_.rotation * n;
      for (int k = 0; k < 3; ++k)
        out.normals.at(x, y, k) = static_cast<float>(n_cam[k]);

      const auto albedo = sample_albedo(*texture_, uv.x(), uv.y());
      const auto shaded = shade_sh(n, albedo, scene_.light);
      for (int k = 0; k < 3; ++k) out.rgb.at(x, y, k) = shaded[k];
    }
  }

  out.rgb = composite(out.rgb, geom, background_);

  if (t + 1 < frame_count()) {
    const Points3& world1 = posed_vertices_[static_cast<size_t>(t + 1)];
    Points3 cam1(world1.rows(), 3);
    for (Eigen::Index i = 0; i < world1.rows(); ++i)
      cam1.row(i) = camera_.to_camera(world1.row(i));
    out.flow = render_flow(geom, cam, cam1, model_.faces, intr_);
    out.flow_valid = true;
  } else {
    out.flow = ImageF32(geom.width, geom.height, 2, 0.0f);
    out.flow_valid = false;
  }

  const auto joints =
      joints_annotation(posed_joints_[static_cast<size_t>(t)], intr_, camera_);
  out.joints2d = joints.joints2d;
  out.joints3d = joints.joints3d;
  out.joints_behind = joints.behind;

  out.depth_labels = quantize_depth(out.depth_m, pelvis_depth(t), quant_);
  return out;
}

FramePasses render_frame(const BodyModelDef& model, const SceneConfig& scene,
                         const AssetBanks& banks, const CameraIntrinsics& intr,
                         std::span<const PoseFrame> frames, int t) {
  return ClipRenderer(model, scene, banks, intr, frames).render_frame(t);
}

bool passes_equal(const FramePasses& a, const FramePasses& b) {
  return a.rgb == b.rgb && a.depth_m == b.depth_m && a.segm == b.segm &&
         a.normals == b.normals && a.flow == b.flow &&
         a.depth_labels == b.depth_labels && a.flow_valid == b.flow_valid &&
         a.joints_behind == b.joints_behind &&
         a.joints2d.rows() == b.joints2d.rows() &&
         (a.joints2d.array() == b.joints2d.array()).all() &&
         (a.joints3d.array() == b.joints3d.array()).all();
}

void validate_passes(const FramePasses& passes) {
  const int w = passes.segm.width();
  const int h = passes.segm.height();
  require(passes.rgb.width() == w && passes.rgb.height() == h &&
              passes.depth_m.width() == w && passes.depth_m.height() == h &&
              passes.normals.width() == w && passes.normals.height() == h &&
              passes.flow.width() == w && passes.flow.height() == h &&
              passes.depth_labels.width() == w && passes.depth_labels.height() == h,
          "pass dimensions differ");

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const uint8_t segm = passes.segm.at(x, y);
      require(segm <= kPartCount, "invalid label in segmentation pass");
      const uint8_t dlab = passes.depth_labels.at(x, y);
      require(dlab <= 19, "invalid label in depth label pass");

      const bool covered = segm > 0;
      const bool has_depth = passes.depth_m.at(x, y) < kDepthSentinel;
      const double norm = std::sqrt(
          double(passes.normals.at(x, y, 0)) * passes.normals.at(x, y, 0) +
          double(passes.normals.at(x, y, 1)) * passes.normals.at(x, y, 1) +
          double(passes.normals.at(x, y, 2)) * passes.normals.at(x, y, 2));
      const bool has_normal = std::abs(norm - 1.0) < 1e-4;
      const bool normal_zero = norm == 0.0;
      require(covered == has_depth, "coverage mismatch: segm vs depth");
      require(covered == has_normal, "coverage mismatch: segm vs normals");
      require(covered || normal_zero, "background normal not zero");
      require(covered == (dlab > 0), "coverage mismatch: segm vs depth labels");
    }
  }
}

}  // namespace shforge
