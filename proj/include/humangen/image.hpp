#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hgen {

/// Binary foreground mask, row-major, row 0 at the top.
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // 0 or 1

  Mask() = default;
  Mask(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0) {}

  std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  void set(int x, int y, std::uint8_t v) { data[static_cast<std::size_t>(y) * width + x] = v; }
  std::size_t count() const {
    std::size_t n = 0;
    for (std::uint8_t v : data) n += (v != 0);
    return n;
  }
  bool operator==(const Mask& o) const {
    return width == o.width && height == o.height && data == o.data;
  }
};

/// 8-bit RGB image, interleaved row-major.
struct ImageRGB8 {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // 3 bytes per pixel

  ImageRGB8() = default;
  ImageRGB8(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

  std::uint8_t* px(int x, int y) { return &data[(static_cast<std::size_t>(y) * width + x) * 3]; }
  const std::uint8_t* px(int x, int y) const {
    return &data[(static_cast<std::size_t>(y) * width + x) * 3];
  }
};

inline Mask flip_horizontal(const Mask& m) {
  Mask out(m.width, m.height);
  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x) out.set(x, y, m.at(m.width - 1 - x, y));
  return out;
}

/// Per-pixel unit normals (or zero for background), one column per pixel,
/// row-major pixel order.
struct NormalMapImage {
  int width = 0;
  int height = 0;
  Eigen::Matrix3Xf normals;

  NormalMapImage() = default;
  NormalMapImage(int w, int h)
      : width(w), height(h), normals(Eigen::Matrix3Xf::Zero(3, static_cast<Eigen::Index>(w) * h)) {}
};

}  // namespace hgen
