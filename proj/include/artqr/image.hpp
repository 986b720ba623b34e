#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace artqr {

inline constexpr int kGrayLevels = 256;  // L
inline constexpr double kMaxGray = kGrayLevels - 1;

/// Luminance raster, row-major, values kept inside [0, 255].
///
/// Pixels are stored as doubles so that the refinement loop and the
/// finite-difference probes can work with sub-gray-level values; images read
/// from PNG are integer valued.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, double fill = 0.0);
  GrayImage(int width, int height, std::vector<double> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return pixels_.empty(); }
  std::size_t size() const noexcept { return pixels_.size(); }

  double at(int x, int y) const { return pixels_[index(x, y)]; }
  void set(int x, int y, double value);

  std::span<const double> pixels() const noexcept { return pixels_; }
  // Writers must keep values in [0, 255]; call clamp() after bulk edits if unsure.
  std::span<double> mutable_pixels() noexcept { return pixels_; }
  void clamp();

  // Round half up to integers, as PNG output would.
  GrayImage quantized() const;

  bool operator==(const GrayImage&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> pixels_;
};

/// 8-bit interleaved RGB raster.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // size 3 * width * height

  RgbImage() = default;
  RgbImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

  bool operator==(const RgbImage&) const = default;
};

/// BT.601 luma (0.299, 0.587, 0.114), rounded to the nearest integer.
GrayImage to_luminance(const RgbImage& rgb);

/// Chroma planes of the full-range BT.601 YCbCr transform.
struct ChromaPlanes {
  int width = 0;
  int height = 0;
  std::vector<double> cb;
  std::vector<double> cr;
};

ChromaPlanes extract_chroma(const RgbImage& rgb);
RgbImage recombine(const GrayImage& luma, const ChromaPlanes& chroma);

RgbImage gray_to_rgb(const GrayImage& gray);

/// Box-filter resampling: every output pixel integrates the source area it covers.
GrayImage resize_area(const GrayImage& src, int width, int height);

double round_half_up(double v);

}  // namespace artqr
