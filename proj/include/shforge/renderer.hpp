#pragma once

#include <span>
#include <vector>

#include "shforge/body_model.hpp"
#include "shforge/camera.hpp"
#include "shforge/ground_truth.hpp"
#include "shforge/image.hpp"
#include "shforge/rasterizer.hpp"
#include "shforge/scene.hpp"

namespace shforge {

/// One frame's full ground truth. Covered pixel sets agree exactly across
/// all passes: {segm > 0} = {depth < sentinel} = {|normal| = 1} =
/// {depth_label > 0}.
struct FramePasses {
  ImageU8 rgb;           // H x W x 3
  ImageF32 depth_m;      // H x W, background = kDepthSentinel
  ImageU8 segm;          // H x W, labels 0..14
  ImageF32 normals;      // H x W x 3, unit camera-space vectors, 0 on background
  ImageF32 flow;         // H x W x 2, pixels, frame t -> t+1
  Points2 joints2d;      // J x 2 pixels
  Points3 joints3d;      // J x 3 camera-space meters
  std::vector<uint8_t> joints_behind;
  ImageU8 depth_labels;  // H x W, labels 0..19
  bool flow_valid = true;
};

bool passes_equal(const FramePasses& a, const FramePasses& b);

/// Throws Error if any pass violates the coverage-consistency invariant or
/// carries an out-of-range label.
void validate_passes(const FramePasses& passes);

/// Majority vertex label per face, ties broken toward the smaller label id.
std::vector<uint8_t> face_part_labels(const BodyModelDef& model);

/// Area-weighted smooth vertex normals of a posed mesh.
Points3 vertex_normals(const Points3& vertices, const FaceIndices& faces);

/// Hard-mask composite: covered pixels keep the body color, the rest take
/// the background (already sized H x W).
ImageU8 composite(const ImageU8& body_rgb, const GeometryBuffers& geom,
                  const ImageU8& background);

/// Forward flow in pixels from the surface points hit at frame t, advected
/// to t+1 with the same face and barycentrics. Background pixels get (0,0).
ImageF32 render_flow(const GeometryBuffers& geom_t, const Points3& cam_verts_t,
                     const Points3& cam_verts_t1, const FaceIndices& faces,
                     const CameraIntrinsics& intr);

/// Renders every frame of one clip with a fixed scene configuration. Posed
/// geometry is precomputed up front; rendering one frame only reads shared
/// state, so distinct frames may be rendered concurrently.
class ClipRenderer {
 public:
  ClipRenderer(const BodyModelDef& model, const SceneConfig& scene,
               const AssetBanks& banks, const CameraIntrinsics& intr,
               std::span<const PoseFrame> frames);

  int frame_count() const { return static_cast<int>(posed_vertices_.size()); }
  const CameraIntrinsics& intrinsics() const { return intr_; }
  const CameraPose& camera() const { return camera_; }
  double pelvis_depth(int t) const;

  FramePasses render_frame(int t) const;

 private:
  const BodyModelDef& model_;
  SceneConfig scene_;
  const ImageU8* texture_;
  ImageU8 background_;
  CameraIntrinsics intr_;
  CameraPose camera_;
  std::vector<uint8_t> face_labels_;
  std::vector<Points3> posed_vertices_;  // world, per frame
  std::vector<Points3> posed_joints_;    // world, per frame
  DepthQuantization quant_;
};

/// Convenience wrapper over ClipRenderer for single-frame use.
FramePasses render_frame(const BodyModelDef& model, const SceneConfig& scene,
                         const AssetBanks& banks, const CameraIntrinsics& intr,
                         std::span<const PoseFrame> frames, int t);

}  // namespace shforge
