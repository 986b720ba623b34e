#include "artqr/image.hpp"

#include <algorithm>
#include <cmath>

#include "artqr/error.hpp"

namespace artqr {

namespace {

double clamp_gray(double v) { return std::clamp(v, 0.0, kMaxGray); }

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(clamp_gray(round_half_up(v)));
}

}  // namespace

double round_half_up(double v) { return std::floor(v + 0.5); }

GrayImage::GrayImage(int width, int height, double fill)
    : width_(width), height_(height),
      pixels_(static_cast<std::size_t>(std::max(width, 0)) * static_cast<std::size_t>(std::max(height, 0)),
              clamp_gray(fill)) {
  if (width < 0 || height < 0) throw Error(ErrorCode::InvalidArgument, "negative image dimensions");
}

GrayImage::GrayImage(int width, int height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width < 0 || height < 0 ||
      pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::DimensionMismatch, "pixel buffer does not match width*height");
  }
  clamp();
}

void GrayImage::set(int x, int y, double value) { pixels_[index(x, y)] = clamp_gray(value); }

void GrayImage::clamp() {
  for (double& p : pixels_) p = clamp_gray(p);
}

GrayImage GrayImage::quantized() const {
  GrayImage out = *this;
  for (double& p : out.pixels_) p = clamp_gray(round_half_up(p));
  return out;
}

GrayImage to_luminance(const RgbImage& rgb) {
  GrayImage out(rgb.width, rgb.height);
  auto px = out.mutable_pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    const int r = rgb.data[3 * i];
    const int g = rgb.data[3 * i + 1];
    const int b = rgb.data[3 * i + 2];
    // Integer form of round(0.299 R + 0.587 G + 0.114 B).
    px[i] = static_cast<double>((299 * r + 587 * g + 114 * b + 500) / 1000);
  }
  return out;
}

ChromaPlanes extract_chroma(const RgbImage& rgb) {
  ChromaPlanes c;
  c.width = rgb.width;
  c.height = rgb.height;
  const std::size_t n = static_cast<std::size_t>(rgb.width) * rgb.height;
  c.cb.resize(n);
  c.cr.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = rgb.data[3 * i];
    const double g = rgb.data[3 * i + 1];
    const double b = rgb.data[3 * i + 2];
    c.cb[i] = 128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b;
    c.cr[i] = 128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b;
  }
  return c;
}

RgbImage recombine(const GrayImage& luma, const ChromaPlanes& chroma) {
  if (luma.width() != chroma.width || luma.height() != chroma.height) {
    throw Error(ErrorCode::DimensionMismatch, "luma and chroma sizes differ");
  }
  RgbImage out(luma.width(), luma.height());
  const auto y = luma.pixels();
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double cb = chroma.cb[i] - 128.0;
    const double cr = chroma.cr[i] - 128.0;
    out.data[3 * i] = to_byte(y[i] + 1.402 * cr);
    out.data[3 * i + 1] = to_byte(y[i] - 0.344136 * cb - 0.714136 * cr);
    out.data[3 * i + 2] = to_byte(y[i] + 1.772 * cb);
  }
  return out;
}

RgbImage gray_to_rgb(const GrayImage& gray) {
  RgbImage out(gray.width(), gray.height());
  const auto p = gray.pixels();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const std::uint8_t v = to_byte(p[i]);
    out.data[3 * i] = out.data[3 * i + 1] = out.data[3 * i + 2] = v;
  }
  return out;
}

GrayImage resize_area(const GrayImage& src, int width, int height) {
  if (width <= 0 || height <= 0 || src.empty()) {
    throw Error(ErrorCode::InvalidArgument, "resize_area needs positive sizes and a non-empty source");
  }
  if (width == src.width() && height == src.height()) return src;

  // Per output column: list of (source column, overlap weight); same for rows.
  struct Tap {
    int index;
    double weight;
  };
  auto taps_for = [](int src_len, int dst_len) {
    std::vector<std::vector<Tap>> taps(static_cast<std::size_t>(dst_len));
    const double scale = static_cast<double>(src_len) / dst_len;
    for (int o = 0; o < dst_len; ++o) {
      const double lo = o * scale;
      const double hi = (o + 1) * scale;
      for (int s = static_cast<int>(std::floor(lo)); s < static_cast<int>(std::ceil(hi)) && s < src_len; ++s) {
        const double w = std::min(hi, s + 1.0) - std::max(lo, static_cast<double>(s));
        if (w > 0) taps[o].push_back({s, w / scale});
      }
    }
    return taps;
  };
  const auto xt = taps_for(src.width(), width);
  const auto yt = taps_for(src.height(), height);

  // Horizontal pass then vertical pass.
  std::vector<double> tmp(static_cast<std::size_t>(width) * src.height());
  const auto sp = src.pixels();
  for (int y = 0; y < src.height(); ++y) {
    for (int x = 0; x < width; ++x) {
      double acc = 0;
      for (const Tap& t : xt[x]) acc += t.weight * sp[static_cast<std::size_t>(y) * src.width() + t.index];
      tmp[static_cast<std::size_t>(y) * width + x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double acc = 0;
      for (const Tap& t : yt[y]) acc += t.weight * tmp[static_cast<std::size_t>(t.index) * width + x];
      out[static_cast<std::size_t>(y) * width + x] = acc;
    }
  }
  return GrayImage(width, height, std::move(out));
}

}  // namespace artqr
