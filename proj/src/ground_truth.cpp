#include "shforge/ground_truth.hpp"

#include <algorithm>
#include <cmath>

#include "shforge/error.hpp"

namespace shforge {

uint8_t quantize_depth_value(double z_m, double pelvis_z_m,
                             const DepthQuantization& q) {
  require(std::isfinite(pelvis_z_m), "pelvis depth not finite");
  const double half = q.n_bins / 2;
  // Clamp before the integer cast; arbitrary depths may not fit an int.
  const double k = std::clamp(
      round_half_up((z_m - pelvis_z_m) / q.bin_width_m), -half, half);
  return static_cast<uint8_t>(static_cast<int>(k) + q.center_label());
}

ImageU8 quantize_depth(const ImageF32& depth_m, double pelvis_z_cam,
                       const DepthQuantization& q) {
  require(depth_m.channels() == 1, "quantize_depth: depth must be 1-channel");
  ImageU8 labels(depth_m.width(), depth_m.height(), 1);
  for (int y = 0; y < depth_m.height(); ++y)
    for (int x = 0; x < depth_m.width(); ++x) {
      const float z = depth_m.at(x, y);
      labels.at(x, y) =
          z >= kDepthSentinel ? 0 : quantize_depth_value(z, pelvis_z_cam, q);
    }
  return labels;
}

double dequantize(int label, const DepthQuantization& q) {
  require(label != 0, "background has no depth");
  require(label >= 1 && label <= q.n_bins, "depth label out of range");
  return (label - q.center_label()) * q.bin_width_m;
}

JointsAnnotation joints_annotation(const Points3& posed_joints_world,
                                   const CameraIntrinsics& intr,
                                   const CameraPose& pose) {
  const Eigen::Index j = posed_joints_world.rows();
  JointsAnnotation ann;
  ann.joints2d.resize(j, 2);
  ann.joints3d.resize(j, 3);
  ann.behind.assign(static_cast<size_t>(j), 0);
  for (Eigen::Index i = 0; i < j; ++i) {
    const Vec3 cam = pose.to_camera(posed_joints_world.row(i));
    ann.joints3d.row(i) = cam;
    const Projection p = project_camera_point(intr, cam);
    ann.joints2d.row(i) = Vec2(p.u, p.v);
    ann.behind[static_cast<size_t>(i)] = p.behind ? 1 : 0;
  }
  return ann;
}

}  // namespace shforge
