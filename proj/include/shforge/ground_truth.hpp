#pragma once

#include <vector>

#include "shforge/camera.hpp"
#include "shforge/image.hpp"
#include "shforge/types.hpp"

namespace shforge {

/// Pelvis-aligned depth classes: 19 bins of 45mm (labels 1..19, label 10
/// centred on the pelvis depth, 9 in front and 9 behind), 0 = background.
/// Out-of-range depths clamp into the extreme bins.
struct DepthQuantization {
  double bin_width_m = 0.045;
  int n_bins = 19;

  int center_label() const { return (n_bins + 1) / 2; }
};

uint8_t quantize_depth_value(double z_m, double pelvis_z_m,
                             const DepthQuantization& q = {});

/// Labels an entire depth pass; background (sentinel) pixels get 0.
ImageU8 quantize_depth(const ImageF32& depth_m, double pelvis_z_cam,
                       const DepthQuantization& q = {});

/// Bin-centre depth offset from the pelvis, in meters. Throws on label 0.
double dequantize(int label, const DepthQuantization& q = {});

struct JointsAnnotation {
  Points2 joints2d;             // pixels, recorded even outside the image
  Points3 joints3d;             // camera-space meters
  std::vector<uint8_t> behind;  // 1 where the joint is behind the camera
};

JointsAnnotation joints_annotation(const Points3& posed_joints_world,
                                   const CameraIntrinsics& intr,
                                   const CameraPose& pose);

}  // namespace shforge
