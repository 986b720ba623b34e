#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "artqr/image.hpp"

namespace artqr {

/// Decoded PNG normalized to 8-bit gray (channels == 1) or RGB (channels == 3).
/// Palette, low bit depths, 16-bit samples and alpha are all folded into those two.
struct PngImage {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;

  bool is_color() const noexcept { return channels == 3; }
  RgbImage to_rgb() const;
  GrayImage to_gray() const;  // luminance for color input
};

PngImage read_png(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const GrayImage& image);
void write_png(const std::filesystem::path& path, const RgbImage& image);

}  // namespace artqr
