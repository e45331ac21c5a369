#include "shforge/camera.hpp"

#include <cmath>

#include "shforge/error.hpp"

namespace shforge {

namespace {
constexpr double kNearEpsilon = 1e-6;
}

CameraIntrinsics intrinsics_from_physical(double focal_mm, double sensor_width_mm,
                                          int width_px, int height_px) {
  require(focal_mm > 0.0, "focal length must be positive");
  require(sensor_width_mm > 0.0, "sensor width must be positive");
  require(width_px > 0 && height_px > 0, "image size must be positive");

  CameraIntrinsics intr;
  intr.fx = focal_mm / sensor_width_mm * width_px;
  intr.fy = intr.fx;
  intr.cx = width_px / 2.0;
  intr.cy = height_px / 2.0;
  intr.width = width_px;
  intr.height = height_px;
  return intr;
}

CameraPose place_camera(const Vec3& pelvis_world, double distance, double yaw) {
  require(distance > 0.0, "camera distance must be positive");

  const Vec3 center =
      pelvis_world + distance * Vec3(std::sin(yaw), 0.0, std::cos(yaw));
  const Vec3 forward = (pelvis_world - center).normalized();
  const Vec3 up = Vec3::UnitY();

  // forward is horizontal by construction, never parallel to up. Camera y
  // points down in world so that +v grows downward in the image.
  const Vec3 x_cam = forward.cross(up).normalized();
  const Vec3 y_cam = forward.cross(x_cam);

  CameraPose pose;
  pose.rotation.row(0) = x_cam;
  pose.rotation.row(1) = y_cam;
  pose.rotation.row(2) = forward;
  pose.translation = -(pose.rotation * center);
  return pose;
}

Projection project_camera_point(const CameraIntrinsics& intr, const Vec3& p) {
  Projection out;
  out.z = p.z();
  if (p.z() <= kNearEpsilon) {
    out.behind = true;
    return out;
  }
  out.u = intr.cx + intr.fx * p.x() / p.z();
  out.v = intr.cy + intr.fy * p.y() / p.z();
  return out;
}

Projection project(const CameraIntrinsics& intr, const CameraPose& pose,
                   const Vec3& point_world) {
  require(point_world.allFinite(), "project: non-finite point");
  return project_camera_point(intr, pose.to_camera(point_world));
}

}  // namespace shforge
