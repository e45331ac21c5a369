#include "shforge/sh.hpp"

#include <algorithm>

namespace shforge {

namespace {
// 1/(2 sqrt(pi)), sqrt(3/(4 pi)), sqrt(15/(4 pi)), sqrt(5/(16 pi)),
// sqrt(15/(16 pi))
constexpr double kY0 = 0.28209479177387814;
constexpr double kY1 = 0.4886025119029199;
constexpr double kY2 = 1.0925484305920792;
constexpr double kY20 = 0.31539156525252005;
constexpr double kY22 = 0.5462742152960396;
}  // namespace

std::array<double, kShCoeffCount> sh_basis(const Vec3& n) {
  const double x = n.x(), y = n.y(), z = n.z();
  return {
      kY0,
      kY1 * y,
      kY1 * z,
      kY1 * x,
      kY2 * x * y,
      kY2 * y * z,
      kY20 * (3.0 * z * z - 1.0),
      kY2 * x * z,
      kY22 * (x * x - y * y),
  };
}

double sh_irradiance(const ShCoeffs& coeffs, const Vec3& n) {
  const auto basis = sh_basis(n);
  double e = 0.0;
  for (int i = 0; i < kShCoeffCount; ++i) e += coeffs[i] * basis[i];
  return e;
}

std::array<double, 3> shade_linear(const Vec3& normal_world,
                                   const std::array<double, 3>& albedo_rgb,
                                   const ShCoeffs& coeffs) {
  const double e = std::max(sh_irradiance(coeffs, normal_world), 0.0);
  return {albedo_rgb[0] * e, albedo_rgb[1] * e, albedo_rgb[2] * e};
}

std::array<uint8_t, 3> shade_sh(const Vec3& normal_world,
                                const std::array<double, 3>& albedo_rgb,
                                const ShCoeffs& coeffs) {
  const auto linear = shade_linear(normal_world, albedo_rgb, coeffs);
  return {quantize_channel(linear[0]), quantize_channel(linear[1]),
          quantize_channel(linear[2])};
}

}  // namespace shforge
