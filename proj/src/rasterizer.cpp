#include "shforge/rasterizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shforge/error.hpp"

namespace shforge {

namespace {

constexpr double kNearEpsilon = 1e-6;

inline double edge(double ax, double ay, double bx, double by, double px,
                   double py) {
  return (bx - ax) * (py - ay) - (by - ay) * (px - ax);
}

}  // namespace

GeometryBuffers rasterize_camera_space(const Points3& vertices_cam,
                                       const FaceIndices& faces,
                                       const CameraIntrinsics& intr) {
  const int w = intr.width;
  const int h = intr.height;
  require(w > 0 && h > 0, "rasterize: empty viewport");

  GeometryBuffers geom;
  geom.width = w;
  geom.height = h;
  geom.face_id.assign(static_cast<size_t>(w) * h, -1);
  geom.bary.assign(static_cast<size_t>(w) * h * 3, 0.0);
  geom.depth.assign(static_cast<size_t>(w) * h,
                    std::numeric_limits<double>::infinity());

  const Eigen::Index nv = vertices_cam.rows();
  std::vector<double> su(nv), sv(nv), sz(nv);
  for (Eigen::Index i = 0; i < nv; ++i) {
    const double z = vertices_cam(i, 2);
    sz[i] = z;
    if (z > kNearEpsilon) {
      su[i] = intr.cx + intr.fx * vertices_cam(i, 0) / z;
      sv[i] = intr.cy + intr.fy * vertices_cam(i, 1) / z;
    }
  }

  for (Eigen::Index f = 0; f < faces.rows(); ++f) {
    const int32_t ia = faces(f, 0), ib = faces(f, 1), ic = faces(f, 2);
    if (sz[ia] <= kNearEpsilon || sz[ib] <= kNearEpsilon || sz[ic] <= kNearEpsilon)
      continue;

    const double ax = su[ia], ay = sv[ia];
    const double bx = su[ib], by = sv[ib];
    const double cx = su[ic], cy = sv[ic];

    const double area = edge(ax, ay, bx, by, cx, cy);
    if (area == 0.0) continue;
    const double inv_area = 1.0 / area;

    const double min_x = std::min({ax, bx, cx});
    const double max_x = std::max({ax, bx, cx});
    const double min_y = std::min({ay, by, cy});
    const double max_y = std::max({ay, by, cy});
    const int x0 = std::max(0, static_cast<int>(std::floor(min_x - 0.5)));
    const int x1 = std::min(w - 1, static_cast<int>(std::ceil(max_x - 0.5)));
    const int y0 = std::max(0, static_cast<int>(std::floor(min_y - 0.5)));
    const int y1 = std::min(h - 1, static_cast<int>(std::ceil(max_y - 0.5)));

    for (int y = y0; y <= y1; ++y) {
      const double py = y + 0.5;
      for (int x = x0; x <= x1; ++x) {
        const double px = x + 0.5;
        // Screen-space barycentrics; dividing by the signed area makes the
        // test orientation independent.
        const double l0 = edge(bx, by, cx, cy, px, py) * inv_area;
        const double l1 = edge(cx, cy, ax, ay, px, py) * inv_area;
        const double l2 = edge(ax, ay, bx, by, px, py) * inv_area;
        if (l0 < 0.0 || l1 < 0.0 || l2 < 0.0) continue;

        const double w0 = l0 / sz[ia];
        const double w1 = l1 / sz[ib];
        const double w2 = l2 / sz[ic];
        const double wsum = w0 + w1 + w2;
        const double z = 1.0 / wsum;

        const size_t idx = geom.pixel_index(x, y);
        if (z < geom.depth[idx]) {
          geom.depth[idx] = z;
          geom.face_id[idx] = static_cast<int32_t>(f);
          geom.bary[idx * 3 + 0] = w0 * z;
          geom.bary[idx * 3 + 1] = w1 * z;
          geom.bary[idx * 3 + 2] = w2 * z;
        }
      }
    }
  }
  return geom;
}

GeometryBuffers rasterize(const Points3& vertices_world, const FaceIndices& faces,
                          const CameraIntrinsics& intr, const CameraPose& pose) {
  Points3 cam(vertices_world.rows(), 3);
  for (Eigen::Index i = 0; i < vertices_world.rows(); ++i)
    cam.row(i) = pose.to_camera(vertices_world.row(i));
  return rasterize_camera_space(cam, faces, intr);
}

}  // namespace shforge
