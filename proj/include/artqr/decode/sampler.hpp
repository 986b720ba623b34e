#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "artqr/image.hpp"
#include "artqr/qr/qr.hpp"

namespace artqr::decode {

/// Binds an image to the module grid: module (row, col) covers the a x a
/// pixel block starting at (origin_x + col * a, origin_y + row * a).
struct ModuleGrid {
  int n = 0;
  int a = 0;
  int origin_x = 0;
  int origin_y = 0;

  int side_pixels() const noexcept { return n * a; }
  bool fits(const GrayImage& img) const;
  void require_fits(const GrayImage& img) const;  // throws GridOutOfBounds

  bool operator==(const ModuleGrid&) const = default;
};

/// Exact rational number used for the strictness eta so that threshold tests
/// are free of floating-point rounding.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational from_double(double v);  // nearest fraction with denominator 10^6, reduced
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Scanner strictness and sampling window.
///   T_b = L (1 - eta) / 2,  T_w = L (1 + eta) / 2
class DecodeParams {
 public:
  DecodeParams(double eta, int window);
  DecodeParams(Rational eta, int window);

  /// eta = 0.6 and window = max(1, a / 3).
  static DecodeParams defaults_for(int module_px, double eta = 0.6);
  static int default_window(int module_px) { return module_px / 3 < 1 ? 1 : module_px / 3; }

  Rational eta() const noexcept { return eta_; }
  int window() const noexcept { return window_; }
  double tb() const noexcept;
  double tw() const noexcept;

  /// Module classification of a window sum: 0 if sum/count <= T_b, 1 if >= T_w, else -1.
  /// Exact for integer-valued sums.
  int classify_sum(double sum, std::int64_t count) const;

  /// Same comparison for a single value (count 1).
  int classify(double value) const { return classify_sum(value, 1); }

  DecodeParams with_window(int window) const { return DecodeParams(eta_, window); }

 private:
  Rational eta_;
  int window_;
};

/// n x n values in {0, 1, -1}; -1 marks modules sampled inside the dead zone.
struct TriMatrix {
  int n = 0;
  std::vector<std::int8_t> values;

  std::int8_t at(int row, int col) const { return values[static_cast<std::size_t>(row) * n + col]; }
};

/// Offset of a centred square of side `inner` inside a module of side `outer`.
inline int centered_offset(int outer, int inner) { return (outer - inner) / 2; }

TriMatrix sample_decode(const GrayImage& img, const ModuleGrid& grid, const DecodeParams& params);

/// Fraction of Data/Padding modules whose sampled value differs from the
/// target bit (dead-zone samples count as errors).
double error_level(const GrayImage& img, const qr::CodeTarget& target, const ModuleGrid& grid,
                   const DecodeParams& params);

/// Number of Data/Padding modules in a target (the denominator of error_level).
int data_module_count(const qr::CodeTarget& target);

/// Plain PBM (P1); black for 0 and dead-zone modules, white for 1.
void write_pbm(std::ostream& out, const TriMatrix& tri);

/// Pure rendering of a code target: each module an a x a block of 0 or 255,
/// surrounded by `quiet_zone` white modules.
GrayImage render_target(const qr::CodeTarget& target, int module_px, int quiet_zone = 0);

}  // namespace artqr::decode
