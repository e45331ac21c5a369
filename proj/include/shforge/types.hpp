#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <cstdint>

namespace shforge {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Rigid = Eigen::Isometry3d;

// Row-major blocks so rows map directly onto per-point file records.
using Points3 = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;
using Points2 = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;
using FaceIndices = Eigen::Matrix<int32_t, Eigen::Dynamic, 3, Eigen::RowMajor>;

inline constexpr int kPartCount = 14;
inline constexpr int kShapeCoeffCount = 10;
inline constexpr int kShCoeffCount = 9;

// Depth value stored on background pixels.
inline constexpr float kDepthSentinel = 1e10f;

inline double round_half_up(double x) { return std::floor(x + 0.5); }

}  // namespace shforge
