#pragma once

#include <vector>

#include "shforge/camera.hpp"
#include "shforge/types.hpp"

namespace shforge {

/// Per-pixel hit record of one rasterized frame. Barycentrics are the
/// perspective-correct (object-space) coordinates, so attributes and 3D
/// positions can be recovered by blending the face's vertices directly.
struct GeometryBuffers {
  int width = 0, height = 0;
  std::vector<int32_t> face_id;  // -1 = background
  std::vector<double> bary;      // 3 per pixel
  std::vector<double> depth;     // camera-space z, valid where covered

  size_t pixel_index(int x, int y) const {
    return static_cast<size_t>(y) * width + x;
  }
  bool covered(int x, int y) const { return face_id[pixel_index(x, y)] >= 0; }
};

/// Perspective-correct z-buffered scan conversion. Pixel centers sit at
/// (x + 0.5, y + 0.5); coverage is inclusive of triangle edges; the nearest
/// surface wins with ties going to the earlier face; no backface culling.
/// Faces with any vertex at or behind the camera plane are skipped.
GeometryBuffers rasterize(const Points3& vertices_world, const FaceIndices& faces,
                          const CameraIntrinsics& intr, const CameraPose& pose);

/// Same, for vertices already in camera space.
GeometryBuffers rasterize_camera_space(const Points3& vertices_cam,
                                       const FaceIndices& faces,
                                       const CameraIntrinsics& intr);

}  // namespace shforge
