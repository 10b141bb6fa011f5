#include "humangen/imageio.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace hgen {

namespace {

struct PngWriteState {
  std::vector<std::uint8_t>* out;
};

void png_write_cb(png_structp png, png_bytep data, png_size_t length) {
  auto* st = static_cast<PngWriteState*>(png_get_io_ptr(png));
  st->out->insert(st->out->end(), data, data + length);
}

void png_flush_cb(png_structp) {}

std::vector<std::uint8_t> encode_png_impl(int width, int height, int color_type,
                                          const std::uint8_t* rows_base, int stride,
                                          int compression_level) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png: create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("png: create_info_struct failed");
  }
  std::vector<std::uint8_t> out;
  PngWriteState st{&out};
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("png: encode failed");
  }
  png_set_write_fn(png, &st, png_write_cb, png_flush_cb);
  png_set_compression_level(png, compression_level);
  png_set_IHDR(png, info, width, height, 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(rows_base + static_cast<std::size_t>(y) * stride));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

struct PngReadState {
  const std::uint8_t* bytes;
  std::size_t size;
  std::size_t pos;
};

void png_read_cb(png_structp png, png_bytep data, png_size_t length) {
  auto* st = static_cast<PngReadState*>(png_get_io_ptr(png));
  if (st->pos + length > st->size) png_error(png, "truncated stream");
  std::memcpy(data, st->bytes + st->pos, length);
  st->pos += length;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const ImageRGB8& img, int compression_level) {
  if (img.width <= 0 || img.height <= 0) throw std::invalid_argument("png: empty image");
  return encode_png_impl(img.width, img.height, PNG_COLOR_TYPE_RGB, img.data.data(),
                         img.width * 3, compression_level);
}

std::vector<std::uint8_t> encode_png(const Mask& mask, int compression_level) {
  if (mask.width <= 0 || mask.height <= 0) throw std::invalid_argument("png: empty mask");
  std::vector<std::uint8_t> gray(mask.data.size());
  for (std::size_t i = 0; i < mask.data.size(); ++i) gray[i] = mask.data[i] ? 255 : 0;
  return encode_png_impl(mask.width, mask.height, PNG_COLOR_TYPE_GRAY, gray.data(), mask.width,
                         compression_level);
}

DecodedImage decode_png(const std::uint8_t* bytes, std::size_t size) {
  if (size < 8 || png_sig_cmp(bytes, 0, 8) != 0) throw std::runtime_error("png: bad signature");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png: create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("png: create_info_struct failed");
  }
  PngReadState st{bytes, size, 0};
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("png: decode failed");
  }
  png_set_read_fn(png, &st, png_read_cb);
  png_read_info(png, info);

  // Normalize to 8-bit gray or rgb.
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_packing(png);
  if (png_get_color_type(png, info) == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY &&
      png_get_bit_depth(png, info) < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  png_read_update_info(png, info);

  DecodedImage img;
  img.width = static_cast<int>(png_get_image_width(png, info));
  img.height = static_cast<int>(png_get_image_height(png, info));
  img.channels = static_cast<int>(png_get_channels(png, info));
  if (img.channels != 1 && img.channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("png: unsupported channel count");
  }
  const std::size_t stride = static_cast<std::size_t>(img.width) * img.channels;
  img.data.resize(stride * img.height);
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y) rows[y] = img.data.data() + y * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

DecodedImage decode_png(const std::vector<std::uint8_t>& bytes) {
  return decode_png(bytes.data(), bytes.size());
}

ImageRGB8 to_rgb(const DecodedImage& img) {
  ImageRGB8 out(img.width, img.height);
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  if (img.channels == 3) {
    out.data = img.data;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      out.data[i * 3] = out.data[i * 3 + 1] = out.data[i * 3 + 2] = img.data[i];
    }
  }
  return out;
}

Mask to_mask(const DecodedImage& img, std::uint8_t threshold) {
  Mask out(img.width, img.height);
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t i = 0; i < n; ++i) {
    bool fg = false;
    for (int c = 0; c < img.channels; ++c) fg |= img.data[i * img.channels + c] > threshold;
    out.data[i] = fg ? 1 : 0;
  }
  return out;
}

std::vector<std::uint8_t> encode_depth(int width, int height, const float* values) {
  std::vector<std::uint8_t> out(8 + static_cast<std::size_t>(width) * height * 4);
  const std::uint32_t w = static_cast<std::uint32_t>(width);
  const std::uint32_t h = static_cast<std::uint32_t>(height);
  std::memcpy(out.data(), &w, 4);
  std::memcpy(out.data() + 4, &h, 4);
  std::memcpy(out.data() + 8, values, static_cast<std::size_t>(width) * height * 4);
  return out;
}

void decode_depth(const std::vector<std::uint8_t>& bytes, int& width, int& height,
                  std::vector<float>& values) {
  if (bytes.size() < 8) throw std::runtime_error("depth: truncated header");
  std::uint32_t w = 0, h = 0;
  std::memcpy(&w, bytes.data(), 4);
  std::memcpy(&h, bytes.data() + 4, 4);
  const std::size_t n = static_cast<std::size_t>(w) * h;
  if (bytes.size() != 8 + n * 4) throw std::runtime_error("depth: size mismatch");
  width = static_cast<int>(w);
  height = static_cast<int>(h);
  values.resize(n);
  std::memcpy(values.data(), bytes.data() + 8, n * 4);
}

std::vector<std::uint8_t> read_binary_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open file: " + path);
  f.seekg(0, std::ios::end);
  const std::streamoff size = f.tellg();
  f.seekg(0);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
  f.read(reinterpret_cast<char*>(bytes.data()), size);
  if (!f) throw std::runtime_error("read failed: " + path);
  return bytes;
}

void write_binary_file(const std::string& path, const std::uint8_t* bytes, std::size_t size) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open file for write: " + path);
  f.write(reinterpret_cast<const char*>(bytes), static_cast<std::streamsize>(size));
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_binary_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  write_binary_file(path, bytes.data(), bytes.size());
}

}  // namespace hgen
