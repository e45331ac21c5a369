#pragma once

#include <functional>
#include <string>

#include "shforge/body_model.hpp"
#include "shforge/error.hpp"
#include "shforge/rng.hpp"

namespace shforge::testing {

/// Runs f and returns the Error message ("" when nothing was thrown).
inline std::string error_message(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

inline bool error_contains(const std::function<void()>& f, const std::string& needle) {
  return error_message(f).find(needle) != std::string::npos;
}

inline Vec3 random_unit(Rng& rng) {
  // Marsaglia rejection from the cube.
  for (;;) {
    const Vec3 v(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                 rng.uniform(-1.0, 1.0));
    const double n = v.norm();
    if (n > 1e-3 && n <= 1.0) return v / n;
  }
}

inline Rigid random_rigid(Rng& rng, double max_translation = 2.0) {
  const Vec3 axis = random_unit(rng);
  const double angle = rng.uniform(0.0, 3.0);
  Rigid g = Rigid::Identity();
  g.linear() = Eigen::AngleAxisd(angle, axis).toRotationMatrix();
  g.translation() = Vec3(rng.uniform(-max_translation, max_translation),
                         rng.uniform(-max_translation, max_translation),
                         rng.uniform(-max_translation, max_translation));
  return g;
}

inline PoseFrame random_pose(Rng& rng, int joints, double amplitude = 0.8) {
  PoseFrame pose;
  pose.root_translation = Vec3(rng.uniform(-1.0, 1.0), rng.uniform(-0.3, 0.3),
                               rng.uniform(-1.0, 1.0));
  pose.joint_rotations.resize(static_cast<size_t>(joints));
  for (Vec3& r : pose.joint_rotations)
    r = rng.uniform(0.0, amplitude) * random_unit(rng);
  return pose;
}

}  // namespace shforge::testing
