#pragma once

#include <cstdint>

#include "humangen/body_model.hpp"
#include "humangen/camera.hpp"
#include "humangen/image.hpp"
#include "humangen/mesh.hpp"

namespace hgen {

// Coverage contract shared with the test oracles: vertices snap to a
// 1/256-pixel integer grid, a pixel (x, y) is sampled at fixed-point center
// (256x + 128, 256y + 128), and boundary pixels follow the top-left rule on
// integer edge functions. Coverage is therefore exact integer arithmetic.
constexpr int kSubpixelBits = 8;
constexpr std::int64_t kSubpixelScale = 1 << kSubpixelBits;

inline std::int64_t snap_to_subpixel(double v) {
  return std::llround(v * static_cast<double>(kSubpixelScale));
}

/// Top-left classification of a directed edge of a CCW-normalized triangle
/// (positive doubled area in y-down pixel coordinates).
inline bool edge_is_top_left(std::int64_t dx, std::int64_t dy) {
  return (dy == 0 && dx > 0) || dy < 0;
}

struct Framebuffer {
  int width = 0;
  int height = 0;
  Eigen::Matrix3Xf normal;  // camera-space unit normals, zero for background
  Eigen::ArrayXf depth;     // camera-space z, +inf for background
  Mask mask;                // pixels whose nearest surface is the body

  static Framebuffer background(int w, int h);
};

struct NormalImage {
  int width = 0;
  int height = 0;
  ImageRGB8 rgb;
};

/// Renders body (and optionally a scene mesh) with a z-buffer. Scene
/// triangles contribute depth and normals; the mask marks pixels whose
/// nearest surface belongs to the body. Normal maps store per-pixel
/// interpolated-then-renormalized vertex normals flipped so the camera-space
/// z component is non-negative.
Framebuffer rasterize(const PosedBody& body, const TriMesh* scene, const CameraSample& camera,
                      const Extrinsics& extr);

inline Framebuffer rasterize(const PosedBody& body, const CameraSample& camera,
                             const Extrinsics& extr) {
  return rasterize(body, nullptr, camera, extr);
}

/// Ground-truth silhouette; identical to rasterize(...).mask with no scene.
Mask render_mask(const PosedBody& body, const CameraSample& camera, const Extrinsics& extr);

/// Encodes normals channelwise as round((n+1)/2 * 255); background is
/// (0, 0, 0).
NormalImage encode_normal_image(const Framebuffer& fb);

/// Decodes an encoded normal image back to unit normals; background pixels
/// (pure black) decode to zero vectors.
NormalMapImage decode_normal_image(const ImageRGB8& rgb);

}  // namespace hgen
