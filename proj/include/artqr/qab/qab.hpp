#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "artqr/decode/sampler.hpp"
#include "artqr/image.hpp"
#include "artqr/qr/free_basis.hpp"
#include "artqr/qr/qr.hpp"

namespace artqr::qab {

using decode::DecodeParams;
using decode::ModuleGrid;

/// Gray-level lookup table produced by histogram polarization.
struct PolarizeMap {
  std::array<int, kGrayLevels> table{};

  int operator()(int level) const { return table[static_cast<std::size_t>(level)]; }
};

struct Polarized {
  GrayImage image;
  PolarizeMap map;
};

/// Equalize the histogram onto [0, L - T_w + T_b] and split it around the dead
/// zone so that no output level lies strictly inside (T_b, T_w).
Polarized histogram_polarize(const GrayImage& img, const DecodeParams& params);

/// n x n module colours, 1 white.
struct ModuleBits {
  int n = 0;
  std::vector<std::uint8_t> bits;

  std::uint8_t at(int row, int col) const { return bits[static_cast<std::size_t>(row) * n + col]; }
};

/// Majority colour of each a x a module block. Exact ties take the fallback bit.
/// Throws DeadZonePixels if any pixel lies strictly inside (T_b, T_w).
ModuleBits binarize_per_module(const GrayImage& hc, const ModuleGrid& grid, const DecodeParams& params,
                               const qr::CodeTarget& fallback);

/// Moves `target` inside target + span(basis) toward `desired` on Data/Padding
/// modules. Modules with higher priority are matched first (row-major order
/// when priority is empty). Never increases the Hamming distance.
qr::CodeTarget module_reorganize(const qr::CodeTarget& target, const ModuleBits& desired,
                                 const qr::FreeBitBasis& basis, std::span<const double> priority = {});

int data_distance(const qr::CodeTarget& target, const ModuleBits& desired);

enum class MarkerStyle { Square, CrossCenterOnly };

std::string_view to_string(MarkerStyle style);
MarkerStyle parse_marker_style(std::string_view text);

struct Blueprint {
  GrayImage image;
  ModuleGrid grid;
  qr::CodeTarget reorganized;
  std::vector<int> u_map;  // n x n control square sides
  MarkerStyle marker_style = MarkerStyle::Square;

  int u(int row, int col) const { return u_map[static_cast<std::size_t>(row) * grid.n + col]; }
};

inline constexpr int kDefaultMinControl = 4;

/// Control square side for one module: argmin over u in [u_min, a] of
/// |E(u) - T| with E(u) = (u^2 fill + sum of hc outside the square) / a^2.
int halftone_size(const GrayImage& hc, const ModuleGrid& grid, int row, int col, int bit,
                  const DecodeParams& params, int u_min);

/// Insert a centred control square into every module of hc.
Blueprint adaptive_halftone(const GrayImage& hc, const qr::CodeTarget& reorganized, const ModuleGrid& grid,
                            const DecodeParams& params, int u_min = kDefaultMinControl);

/// Overwrite finder and alignment regions with the module template. Idempotent.
Blueprint affix_markers(Blueprint bp, MarkerStyle style);

/// Pixel mask of the finder cross-centres (3-module arms through the finder
/// centre, spanning finder and separator) and the alignment centre crosses.
struct CrossCenterMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> mask;

  bool at(int x, int y) const { return mask[static_cast<std::size_t>(y) * width + x] != 0; }
  std::size_t count() const;
};

/// Module-level cross-centre membership (n x n).
std::vector<std::uint8_t> cross_center_modules(int version);

CrossCenterMask cross_center_mask(const ModuleGrid& grid, int version, int width, int height);

struct BlueprintOptions {
  int module_px = 16;
  int mask = 0;
  int u_min = kDefaultMinControl;
  MarkerStyle style = MarkerStyle::Square;
};

/// Guidance image is centre-cropped to a square and area-resampled to n * a.
/// The control squares are never smaller than the sampling window.
Blueprint make_blueprint(const GrayImage& guidance, const qr::Message& msg, const DecodeParams& params,
                         const BlueprintOptions& opts = {});

}  // namespace artqr::qab
