#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "humangen/image.hpp"

namespace hgen {

/// PNG codec (libpng). Masks serialize as 8-bit grayscale 0/255, everything
/// else as 8-bit RGB. compression_level 0..9; 1 is the pipeline default.
std::vector<std::uint8_t> encode_png(const ImageRGB8& img, int compression_level = 1);
std::vector<std::uint8_t> encode_png(const Mask& mask, int compression_level = 1);

struct DecodedImage {
  int width = 0;
  int height = 0;
  int channels = 0;  // 1 or 3
  std::vector<std::uint8_t> data;
};

DecodedImage decode_png(const std::uint8_t* bytes, std::size_t size);
DecodedImage decode_png(const std::vector<std::uint8_t>& bytes);

ImageRGB8 to_rgb(const DecodedImage& img);
/// Grayscale/rgb image to binary mask: foreground = any channel above the
/// threshold.
Mask to_mask(const DecodedImage& img, std::uint8_t threshold = 127);

/// Depth maps: little-endian binary, u32 width, u32 height, then
/// width*height f32 camera-space z values row-major.
std::vector<std::uint8_t> encode_depth(int width, int height, const float* values);
void decode_depth(const std::vector<std::uint8_t>& bytes, int& width, int& height,
                  std::vector<float>& values);

std::vector<std::uint8_t> read_binary_file(const std::string& path);
void write_binary_file(const std::string& path, const std::uint8_t* bytes, std::size_t size);
void write_binary_file(const std::string& path, const std::vector<std::uint8_t>& bytes);

}  // namespace hgen
