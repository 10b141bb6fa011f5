#include "humangen/rasterizer.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "humangen/mesh.hpp"

namespace hgen {

namespace {

// Beyond this many pixels from the viewport, triangles are clipped before
// snapping so the int64 edge functions cannot overflow.
constexpr double kGuardBandPx = 1.0e6;

struct CamVertex {
  Vec3 position;  // camera space
  Vec3 normal;    // camera space, unnormalized is fine
};

struct ScreenVertex {
  double x = 0.0;
  double y = 0.0;
  double inv_z = 0.0;
  Vec3 n_over_z = Vec3::Zero();
};

ScreenVertex project_vertex(const CamVertex& v, double fx, double fy, double cx, double cy) {
  ScreenVertex s;
  const double iz = 1.0 / v.position.z();
  s.x = cx + fx * v.position.x() * iz;
  s.y = cy + fy * v.position.y() * iz;
  s.inv_z = iz;
  s.n_over_z = v.normal * iz;
  return s;
}

// Sutherland-Hodgman against z > kZNear.
std::vector<CamVertex> clip_near(const CamVertex tri[3]) {
  std::vector<CamVertex> out;
  out.reserve(4);
  for (int i = 0; i < 3; ++i) {
    const CamVertex& a = tri[i];
    const CamVertex& b = tri[(i + 1) % 3];
    const bool a_in = a.position.z() > kZNear;
    const bool b_in = b.position.z() > kZNear;
    if (a_in) out.push_back(a);
    if (a_in != b_in) {
      const double t = (kZNear - a.position.z()) / (b.position.z() - a.position.z());
      CamVertex m;
      m.position = a.position + t * (b.position - a.position);
      m.position.z() = kZNear;
      m.normal = a.normal + t * (b.normal - a.normal);
      out.push_back(m);
    }
  }
  return out;
}

// Screen-space clip against one half-plane; attributes are affine in screen
// coordinates over the triangle, so linear interpolation is exact.
void clip_halfplane(std::vector<ScreenVertex>& poly, int axis, double bound, bool keep_below) {
  bool all_in = true;
  for (const ScreenVertex& v : poly) {
    const double c = axis == 0 ? v.x : v.y;
    if (keep_below ? (c > bound) : (c < bound)) {
      all_in = false;
      break;
    }
  }
  if (all_in) return;
  std::vector<ScreenVertex> out;
  out.reserve(poly.size() + 1);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const ScreenVertex& a = poly[i];
    const ScreenVertex& b = poly[(i + 1) % poly.size()];
    const double ca = axis == 0 ? a.x : a.y;
    const double cb = axis == 0 ? b.x : b.y;
    const bool a_in = keep_below ? (ca <= bound) : (ca >= bound);
    const bool b_in = keep_below ? (cb <= bound) : (cb >= bound);
    if (a_in) out.push_back(a);
    if (a_in != b_in) {
      const double t = (bound - ca) / (cb - ca);
      ScreenVertex m;
      m.x = a.x + t * (b.x - a.x);
      m.y = a.y + t * (b.y - a.y);
      m.inv_z = a.inv_z + t * (b.inv_z - a.inv_z);
      m.n_over_z = a.n_over_z + t * (b.n_over_z - a.n_over_z);
      out.push_back(m);
    }
  }
  poly.swap(out);
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

struct Raster {
  Framebuffer* fb;

  void triangle(const ScreenVertex& s0, const ScreenVertex& s1, const ScreenVertex& s2,
                bool is_body) {
    ScreenVertex v0 = s0, v1 = s1, v2 = s2;
    std::int64_t x0 = snap_to_subpixel(v0.x), y0 = snap_to_subpixel(v0.y);
    std::int64_t x1 = snap_to_subpixel(v1.x), y1 = snap_to_subpixel(v1.y);
    std::int64_t x2 = snap_to_subpixel(v2.x), y2 = snap_to_subpixel(v2.y);

    std::int64_t area2 = (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0);
    if (area2 == 0) return;
    if (area2 < 0) {
      std::swap(v1, v2);
      std::swap(x1, x2);
      std::swap(y1, y2);
      area2 = -area2;
    }

    const int w = fb->width, h = fb->height;
    const std::int64_t min_x = std::min({x0, x1, x2});
    const std::int64_t max_x = std::max({x0, x1, x2});
    const std::int64_t min_y = std::min({y0, y1, y2});
    const std::int64_t max_y = std::max({y0, y1, y2});
    // Pixel x has fixed-point center 256x + 128.
    int px0 = static_cast<int>(floor_div(min_x - 128 + kSubpixelScale - 1, kSubpixelScale));
    int px1 = static_cast<int>(floor_div(max_x - 128, kSubpixelScale));
    int py0 = static_cast<int>(floor_div(min_y - 128 + kSubpixelScale - 1, kSubpixelScale));
    int py1 = static_cast<int>(floor_div(max_y - 128, kSubpixelScale));
    px0 = std::max(px0, 0);
    py0 = std::max(py0, 0);
    px1 = std::min(px1, w - 1);
    py1 = std::min(py1, h - 1);
    if (px0 > px1 || py0 > py1) return;

    // Edge i is opposite vertex i; w_i is its edge function at the sample.
    const std::int64_t ex[3] = {x2 - x1, x0 - x2, x1 - x0};
    const std::int64_t ey[3] = {y2 - y1, y0 - y2, y1 - y0};
    const std::int64_t ox[3] = {x1, x2, x0};
    const std::int64_t oy[3] = {y1, y2, y0};
    std::int64_t wrow[3], dwx[3], dwy[3], bias[3];
    const std::int64_t cx0 = static_cast<std::int64_t>(px0) * kSubpixelScale + 128;
    const std::int64_t cy0 = static_cast<std::int64_t>(py0) * kSubpixelScale + 128;
    for (int e = 0; e < 3; ++e) {
      wrow[e] = ex[e] * (cy0 - oy[e]) - ey[e] * (cx0 - ox[e]);
      dwx[e] = -ey[e] * kSubpixelScale;
      dwy[e] = ex[e] * kSubpixelScale;
      bias[e] = edge_is_top_left(ex[e], ey[e]) ? 0 : -1;
    }

    const double inv_area = 1.0 / static_cast<double>(area2);
    for (int py = py0; py <= py1; ++py) {
      std::int64_t we[3] = {wrow[0], wrow[1], wrow[2]};
      for (int px = px0; px <= px1; ++px) {
        if (we[0] + bias[0] >= 0 && we[1] + bias[1] >= 0 && we[2] + bias[2] >= 0) {
          const double l0 = static_cast<double>(we[0]) * inv_area;
          const double l1 = static_cast<double>(we[1]) * inv_area;
          const double l2 = static_cast<double>(we[2]) * inv_area;
          const double inv_z = l0 * v0.inv_z + l1 * v1.inv_z + l2 * v2.inv_z;
          const float depth = static_cast<float>(1.0 / inv_z);
          const std::size_t idx = static_cast<std::size_t>(py) * w + px;
          if (depth < fb->depth[static_cast<Eigen::Index>(idx)]) {
            Vec3 n = (l0 * v0.n_over_z + l1 * v1.n_over_z + l2 * v2.n_over_z) / inv_z;
            const double norm = n.norm();
            if (norm > 0.0) n /= norm;
            if (n.z() < 0.0) n = -n;
            fb->depth[static_cast<Eigen::Index>(idx)] = depth;
            fb->normal.col(static_cast<Eigen::Index>(idx)) = n.cast<float>();
            fb->mask.data[idx] = is_body ? 1 : 0;
          }
        }
        we[0] += dwx[0];
        we[1] += dwx[1];
        we[2] += dwx[2];
      }
      wrow[0] += dwy[0];
      wrow[1] += dwy[1];
      wrow[2] += dwy[2];
    }
  }
};

void raster_mesh(Framebuffer& fb, const Points3& vertices, const Faces& faces,
                 const CameraSample& camera, const Extrinsics& extr, bool is_body) {
  if (vertices.cols() == 0 || faces.cols() == 0) return;

  const Points3 cam_verts = extr.to_camera(vertices);
  // Smooth bodies get interpolated vertex normals; sparse meshes (under 3
  // faces per vertex on average) use flat face normals.
  const bool smooth = faces.cols() * 3 >= vertices.cols() * 3;
  Eigen::Matrix3Xd cam_normals;
  if (smooth) {
    cam_normals = extr.rotation * compute_vertex_normals(vertices, faces);
  }

  const double fx = camera.f_ndc * camera.width / 2.0;
  const double fy = camera.f_ndc * camera.height / 2.0;
  const double cx = camera.width / 2.0;
  const double cy = camera.height / 2.0;

  Raster raster{&fb};
  for (Eigen::Index f = 0; f < faces.cols(); ++f) {
    CamVertex tri[3];
    for (int k = 0; k < 3; ++k) {
      const Eigen::Index vi = static_cast<Eigen::Index>(faces(k, f));
      tri[k].position = cam_verts.col(vi);
      if (smooth) tri[k].normal = cam_normals.col(vi);
    }
    if (!smooth) {
      const Vec3 fn = (tri[1].position - tri[0].position)
                          .cross(tri[2].position - tri[0].position);
      tri[0].normal = tri[1].normal = tri[2].normal = fn;
    }

    const bool needs_clip = !(tri[0].position.z() > kZNear && tri[1].position.z() > kZNear &&
                              tri[2].position.z() > kZNear);
    std::vector<ScreenVertex> poly;
    if (!needs_clip) {
      poly = {project_vertex(tri[0], fx, fy, cx, cy), project_vertex(tri[1], fx, fy, cx, cy),
              project_vertex(tri[2], fx, fy, cx, cy)};
    } else {
      const std::vector<CamVertex> clipped = clip_near(tri);
      if (clipped.size() < 3) continue;
      poly.reserve(clipped.size());
      for (const CamVertex& v : clipped) poly.push_back(project_vertex(v, fx, fy, cx, cy));
    }

    clip_halfplane(poly, 0, -kGuardBandPx, false);
    clip_halfplane(poly, 0, kGuardBandPx + camera.width, true);
    clip_halfplane(poly, 1, -kGuardBandPx, false);
    clip_halfplane(poly, 1, kGuardBandPx + camera.height, true);
    if (poly.size() < 3) continue;

    for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
      raster.triangle(poly[0], poly[k], poly[k + 1], is_body);
    }
  }
}

}  // namespace

Framebuffer Framebuffer::background(int w, int h) {
  Framebuffer fb;
  fb.width = w;
  fb.height = h;
  const Eigen::Index n = static_cast<Eigen::Index>(w) * h;
  fb.normal = Eigen::Matrix3Xf::Zero(3, n);
  fb.depth = Eigen::ArrayXf::Constant(n, std::numeric_limits<float>::infinity());
  fb.mask = Mask(w, h);
  return fb;
}

Framebuffer rasterize(const PosedBody& body, const TriMesh* scene, const CameraSample& camera,
                      const Extrinsics& extr) {
  if (camera.width <= 0 || camera.height <= 0)
    throw std::invalid_argument("rasterize: bad framebuffer size");
  Framebuffer fb = Framebuffer::background(camera.width, camera.height);
  raster_mesh(fb, body.vertices, body.faces, camera, extr, /*is_body=*/true);
  if (scene) raster_mesh(fb, scene->vertices, scene->faces, camera, extr, /*is_body=*/false);
  return fb;
}

Mask render_mask(const PosedBody& body, const CameraSample& camera, const Extrinsics& extr) {
  return rasterize(body, nullptr, camera, extr).mask;
}

NormalImage encode_normal_image(const Framebuffer& fb) {
  NormalImage out;
  out.width = fb.width;
  out.height = fb.height;
  out.rgb = ImageRGB8(fb.width, fb.height);
  const std::size_t n = static_cast<std::size_t>(fb.width) * fb.height;
  for (std::size_t i = 0; i < n; ++i) {
    if (!fb.mask.data[i] && !std::isfinite(fb.depth[static_cast<Eigen::Index>(i)])) continue;
    for (int c = 0; c < 3; ++c) {
      const double v = (static_cast<double>(fb.normal(c, static_cast<Eigen::Index>(i))) + 1.0) /
                       2.0 * 255.0;
      out.rgb.data[i * 3 + c] = static_cast<std::uint8_t>(std::lround(v));
    }
  }
  return out;
}

NormalMapImage decode_normal_image(const ImageRGB8& rgb) {
  NormalMapImage out(rgb.width, rgb.height);
  const std::size_t n = static_cast<std::size_t>(rgb.width) * rgb.height;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t r = rgb.data[i * 3], g = rgb.data[i * 3 + 1], b = rgb.data[i * 3 + 2];
    if (r == 0 && g == 0 && b == 0) continue;
    Eigen::Vector3f v(r / 255.0f * 2.0f - 1.0f, g / 255.0f * 2.0f - 1.0f,
                      b / 255.0f * 2.0f - 1.0f);
    const float norm = v.norm();
    if (norm > 0.0f) v /= norm;
    out.normals.col(static_cast<Eigen::Index>(i)) = v;
  }
  return out;
}

}  // namespace hgen
