#pragma once

#include <array>
#include <cstdint>

#include "shforge/types.hpp"

namespace shforge {

using ShCoeffs = std::array<double, kShCoeffCount>;

/// Real orthonormal spherical harmonics, bands 0-2, for a unit direction.
/// Order: constant; band 1 as (y, z, x); band 2 as (xy, yz, 3z^2-1, xz,
/// x^2-y^2) with the usual normalization constants.
std::array<double, kShCoeffCount> sh_basis(const Vec3& n);

/// E(n) = sum_i c_i * Y_i(n).
double sh_irradiance(const ShCoeffs& coeffs, const Vec3& n);

/// albedo * max(E, 0), one irradiance value shared by all three channels.
std::array<double, 3> shade_linear(const Vec3& normal_world,
                                   const std::array<double, 3>& albedo_rgb,
                                   const ShCoeffs& coeffs);

inline uint8_t quantize_channel(double v) {
  const double q = round_half_up(255.0 * v);
  return static_cast<uint8_t>(q < 0.0 ? 0.0 : (q > 255.0 ? 255.0 : q));
}

std::array<uint8_t, 3> shade_sh(const Vec3& normal_world,
                                const std::array<double, 3>& albedo_rgb,
                                const ShCoeffs& coeffs);

}  // namespace shforge
