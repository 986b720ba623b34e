#include "artqr/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>

#include "artqr/error.hpp"

namespace artqr {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return f;
}

void write_raw(const std::filesystem::path& path, int width, int height, int color_type,
               const std::uint8_t* data, int channels) {
  FilePtr f = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::Io, "libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::Io, "failed writing " + path.string());
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(data + static_cast<std::size_t>(y) * stride));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

RgbImage PngImage::to_rgb() const {
  RgbImage out(width, height);
  if (channels == 3) {
    out.data = data;
  } else {
    for (std::size_t i = 0; i < data.size(); ++i) {
      out.data[3 * i] = out.data[3 * i + 1] = out.data[3 * i + 2] = data[i];
    }
  }
  return out;
}

GrayImage PngImage::to_gray() const {
  if (channels == 3) return to_luminance(to_rgb());
  std::vector<double> px(data.begin(), data.end());
  return GrayImage(width, height, std::move(px));
}

PngImage read_png(const std::filesystem::path& path) {
  FilePtr f = open_file(path, "rb");
  png_byte sig[8];
  if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw Error(ErrorCode::Io, path.string() + " is not a PNG file");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::Io, "libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::Io, "corrupt PNG " + path.string());
  }
  png_init_io(png, f.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const png_byte color_type = png_get_color_type(png, info);
  const png_byte bit_depth = png_get_bit_depth(png, info);
  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  PngImage out;
  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.channels = png_get_channels(png, info);
  if (out.channels != 1 && out.channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::Io, "unsupported PNG channel layout in " + path.string());
  }
  const std::size_t stride = png_get_rowbytes(png, info);
  out.data.resize(stride * out.height);
  std::vector<png_bytep> rows(static_cast<std::size_t>(out.height));
  for (int y = 0; y < out.height; ++y) rows[y] = out.data.data() + static_cast<std::size_t>(y) * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

void write_png(const std::filesystem::path& path, const GrayImage& image) {
  const GrayImage q = image.quantized();
  const auto px = q.pixels();
  std::vector<std::uint8_t> bytes(px.size());
  for (std::size_t i = 0; i < px.size(); ++i) bytes[i] = static_cast<std::uint8_t>(px[i]);
  write_raw(path, image.width(), image.height(), PNG_COLOR_TYPE_GRAY, bytes.data(), 1);
}

void write_png(const std::filesystem::path& path, const RgbImage& image) {
  write_raw(path, image.width, image.height, PNG_COLOR_TYPE_RGB, image.data.data(), 3);
}

}  // namespace artqr
