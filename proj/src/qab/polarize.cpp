#include <algorithm>
#include <cmath>

#include "artqr/error.hpp"
#include "artqr/qab/qab.hpp"

namespace artqr::qab {

Polarized histogram_polarize(const GrayImage& img, const DecodeParams& params) {
  if (img.empty()) throw Error(ErrorCode::InvalidArgument, "histogram_polarize: empty image");

  std::array<std::int64_t, kGrayLevels> hist{};
  for (double v : img.pixels()) {
    const int level = std::clamp(static_cast<int>(round_half_up(v)), 0, kGrayLevels - 1);
    ++hist[static_cast<std::size_t>(level)];
  }

  const double tb = params.tb();
  const double tw = params.tw();
  const double span = kGrayLevels - tw + tb;
  const auto total = static_cast<double>(img.size());

  PolarizeMap map;
  std::int64_t cum = 0;
  for (int level = 0; level < kGrayLevels; ++level) {
    cum += hist[static_cast<std::size_t>(level)];
    const double flat = span * (static_cast<double>(cum) / total);
    const bool low = flat < tb;
    double out = round_half_up(low ? flat : flat + tw - tb);
    // Rounding may step into the dead zone when a threshold is not an integer.
    if (params.classify(out) < 0) out = low ? std::floor(tb) : std::ceil(tw);
    map.table[static_cast<std::size_t>(level)] = std::clamp(static_cast<int>(out), 0, kGrayLevels - 1);
  }

  GrayImage out(img.width(), img.height());
  auto dst = out.mutable_pixels();
  const auto src = img.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const int level = std::clamp(static_cast<int>(round_half_up(src[i])), 0, kGrayLevels - 1);
    dst[i] = map(level);
  }
  return {std::move(out), map};
}

ModuleBits binarize_per_module(const GrayImage& hc, const ModuleGrid& grid, const DecodeParams& params,
                               const qr::CodeTarget& fallback) {
  grid.require_fits(hc);
  if (fallback.n != grid.n) throw Error(ErrorCode::DimensionMismatch, "binarize_per_module: target size");
  ModuleBits out{grid.n, std::vector<std::uint8_t>(static_cast<std::size_t>(grid.n) * grid.n)};
  for (int r = 0; r < grid.n; ++r) {
    for (int c = 0; c < grid.n; ++c) {
      int white = 0;
      int black = 0;
      const int x0 = grid.origin_x + c * grid.a;
      const int y0 = grid.origin_y + r * grid.a;
      for (int y = y0; y < y0 + grid.a; ++y) {
        for (int x = x0; x < x0 + grid.a; ++x) {
          const int v = params.classify(hc.at(x, y));
          if (v < 0) throw Error(ErrorCode::DeadZonePixels, "binarize_per_module: pixel inside (T_b, T_w)");
          (v ? white : black) += 1;
        }
      }
      out.bits[static_cast<std::size_t>(r) * grid.n + c] =
          white == black ? fallback.bit(r, c) : static_cast<std::uint8_t>(white > black);
    }
  }
  return out;
}

}  // namespace artqr::qab
