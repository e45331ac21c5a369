#pragma once

#include "shforge/types.hpp"

namespace shforge {

struct CameraIntrinsics {
  double fx = 0.0, fy = 0.0;
  double cx = 0.0, cy = 0.0;
  int width = 320, height = 240;
};

/// fx = fy = focal_mm / sensor_width_mm * width_px (square pixels), principal
/// point at the image centre.
CameraIntrinsics intrinsics_from_physical(double focal_mm, double sensor_width_mm,
                                          int width_px, int height_px);

/// World-to-camera rigid transform. Camera space: x right, y down, z forward.
struct CameraPose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 to_camera(const Vec3& world) const { return rotation * world + translation; }
};

/// Places the camera in the horizontal plane at pelvis height, `distance`
/// metres away along the given yaw, aimed straight at the pelvis with the
/// world up axis (+y) as image up.
CameraPose place_camera(const Vec3& pelvis_world, double distance, double yaw);

struct Projection {
  double u = 0.0, v = 0.0;
  double z = 0.0;  // camera-space depth, meters
  bool behind = false;
};

Projection project(const CameraIntrinsics& intr, const CameraPose& pose,
                   const Vec3& point_world);

/// Projection of an already camera-space point.
Projection project_camera_point(const CameraIntrinsics& intr, const Vec3& point_cam);

}  // namespace shforge
