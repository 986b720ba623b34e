#pragma once

#include <array>
#include <optional>

#include "artqr/decode/sampler.hpp"
#include "artqr/image.hpp"
#include "artqr/qr/qr.hpp"

namespace artqr::decode {

/// Row-major 3x3 projective map.
struct Homography {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  std::array<double, 2> apply(double x, double y) const;
  Homography inverse() const;
  Homography operator*(const Homography& rhs) const;

  /// Exact map taking src[i] to dst[i] for four point pairs.
  static Homography from_points(const std::array<std::array<double, 2>, 4>& src,
                                const std::array<std::array<double, 2>, 4>& dst);
};

struct FinderCandidate {
  double x = 0;
  double y = 0;
  double module_size = 0;
  int count = 0;
};

/// Centres of 1:1:3:1:1 finder patterns confirmed horizontally and vertically.
/// Pixels outside the image count as light, so codes flush with the border work.
std::vector<FinderCandidate> find_finder_candidates(const GrayImage& img, double threshold);

struct DecodeReport {
  qr::Message message;
  // Layout rebuilt from the corrected codewords: the ideal module colours.
  qr::CodeTarget corrected;
  int corrected_errors = 0;
  // Module coordinates (col, row), with (0, 0) the outer corner of module (0, 0), to pixels.
  Homography module_to_image;
  // Present when the code sits axis-aligned on an integer pixel grid.
  std::optional<ModuleGrid> grid;
};

/// Full scanner: locate finder triad (and alignment pattern), fit the module
/// grid, sample module centres, read format info and RS-decode.
/// Throws NotFound when no finder triad exists, Unrecoverable/FormatError otherwise.
DecodeReport standard_decode_report(const GrayImage& img, const DecodeParams& params);

qr::Message standard_decode(const GrayImage& img, const DecodeParams& params);

}  // namespace artqr::decode
