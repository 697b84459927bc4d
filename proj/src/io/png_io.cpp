#include "phvi/io/png_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>

#include <png.h>

#include "phvi/errors.hpp"
#include "phvi/io/files.hpp"

namespace phvi::io {
namespace {

void on_png_error(png_structp png, png_const_charp msg) {
  auto* what = static_cast<std::string*>(png_get_error_ptr(png));
  if (what) *what = msg;
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

void append_bytes(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

void flush_noop(png_structp) {}

struct MemoryReader {
  const std::vector<std::uint8_t>* bytes;
  std::size_t offset;
};

void read_bytes(png_structp png, png_bytep data, png_size_t length) {
  auto* r = static_cast<MemoryReader*>(png_get_io_ptr(png));
  if (r->offset + length > r->bytes->size()) png_error(png, "truncated PNG");
  std::copy_n(r->bytes->data() + r->offset, length, data);
  r->offset += length;
}

}  // namespace

std::uint8_t quantize8(double v) {
  const double scaled = std::clamp(v, 0.0, 1.0) * 255.0;
  // nearbyint honours the default round-to-nearest-even mode.
  return static_cast<std::uint8_t>(std::nearbyint(scaled));
}

std::vector<std::uint8_t> encode_png_rgb8(const PlanarImage& rgb) {
  if (rgb.channels() != 3 || rgb.empty()) {
    throw DimensionError("PNG output requires a non-empty 3-channel image");
  }
  const std::size_t h = rgb.height(), w = rgb.width();
  std::vector<std::uint8_t> pixels(h * w * 3);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      for (std::size_t c = 0; c < 3; ++c) {
        pixels[(y * w + x) * 3 + c] = quantize8(rgb.at(c, y, x));
      }
    }
  }

  std::string err;
  std::vector<std::uint8_t> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err,
                                            on_png_error, on_png_warning);
  if (!png) throw Error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  std::vector<png_bytep> rows(h);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("PNG encode failed: " + err);
  }
  png_set_write_fn(png, &out, append_bytes, flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  for (std::size_t y = 0; y < h; ++y) rows[y] = pixels.data() + y * w * 3;
  png_set_rows(png, info, rows.data());
  png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

void write_png_rgb8(const PlanarImage& rgb, const std::filesystem::path& path) {
  write_atomic(path, encode_png_rgb8(rgb));
}

PlanarImage read_png_rgb(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_binary(path);
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw ParseError(path.string(), path.string() + " is not a PNG file");
  }
  std::string err;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err,
                                           on_png_error, on_png_warning);
  if (!png) throw Error("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  MemoryReader reader{&bytes, 0};
  PlanarImage image;
  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ParseError(path.string(), "PNG decode failed for " + path.string() + ": " + err);
  }
  png_set_read_fn(png, &reader, read_bytes);
  png_read_info(png, info);

  const png_byte color = png_get_color_type(png, info);
  const png_byte depth = png_get_bit_depth(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_strip_alpha(png);
  if (depth == 16) png_set_swap(png);  // host little-endian uint16 below
  png_read_update_info(png, info);

  const std::size_t w = png_get_image_width(png, info);
  const std::size_t h = png_get_image_height(png, info);
  const std::size_t out_depth = png_get_bit_depth(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  pixels.resize(stride * h);
  rows.resize(h);
  for (std::size_t y = 0; y < h; ++y) rows[y] = pixels.data() + y * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  image = PlanarImage(3, h, w);
  for (std::size_t y = 0; y < h; ++y) {
    const std::uint8_t* row = pixels.data() + y * stride;
    for (std::size_t x = 0; x < w; ++x) {
      for (std::size_t c = 0; c < 3; ++c) {
        if (out_depth == 16) {
          std::uint16_t v;
          std::memcpy(&v, row + (x * 3 + c) * 2, 2);
          image.at(c, y, x) = v / 65535.0;
        } else {
          image.at(c, y, x) = row[x * 3 + c] / 255.0;
        }
      }
    }
  }
  return image;
}

}  // namespace phvi::io
