#include <algorithm>
#include <cmath>

#include "artqr/error.hpp"
#include "artqr/qab/qab.hpp"

namespace artqr::qab {

namespace {

double block_sum(const GrayImage& img, int x0, int y0, int side) {
  double s = 0;
  for (int y = y0; y < y0 + side; ++y) {
    for (int x = x0; x < x0 + side; ++x) s += img.at(x, y);
  }
  return s;
}

}  // namespace

int halftone_size(const GrayImage& hc, const ModuleGrid& grid, int row, int col, int bit,
                  const DecodeParams& params, int u_min) {
  const int a = grid.a;
  if (u_min < 0 || u_min > a) throw Error(ErrorCode::InvalidArgument, "halftone: u_min outside [0, a]");
  const int x0 = grid.origin_x + col * a;
  const int y0 = grid.origin_y + row * a;
  const double total = block_sum(hc, x0, y0, a);
  const double fill = bit ? kMaxGray : 0.0;

  // |E(u) - T| compared as |2 den N(u) - a^2 L (den -+ num)| to stay exact.
  const auto eta = params.eta();
  const long double target = static_cast<long double>(a) * a * kGrayLevels *
                             static_cast<long double>(bit ? eta.den + eta.num : eta.den - eta.num);
  int best_u = u_min;
  long double best = -1;
  for (int u = u_min; u <= a; ++u) {
    const int off = decode::centered_offset(a, u);
    const double inside = block_sum(hc, x0 + off, y0 + off, u);
    const long double n = static_cast<long double>(u) * u * fill + (total - inside);
    const long double dist = std::fabs(2.0L * static_cast<long double>(eta.den) * n - target);
    if (best < 0 || dist < best) {
      best = dist;
      best_u = u;
    }
  }
  return best_u;
}

Blueprint adaptive_halftone(const GrayImage& hc, const qr::CodeTarget& reorganized, const ModuleGrid& grid,
                            const DecodeParams& params, int u_min) {
  grid.require_fits(hc);
  if (reorganized.n != grid.n) throw Error(ErrorCode::DimensionMismatch, "adaptive_halftone: target size");
  Blueprint bp;
  bp.image = hc;
  bp.grid = grid;
  bp.reorganized = reorganized;
  bp.u_map.assign(static_cast<std::size_t>(grid.n) * grid.n, 0);
  for (int r = 0; r < grid.n; ++r) {
    for (int c = 0; c < grid.n; ++c) {
      const int bit = reorganized.bit(r, c);
      const int u = halftone_size(hc, grid, r, c, bit, params, u_min);
      bp.u_map[static_cast<std::size_t>(r) * grid.n + c] = u;
      const int off = decode::centered_offset(grid.a, u);
      const int x0 = grid.origin_x + c * grid.a + off;
      const int y0 = grid.origin_y + r * grid.a + off;
      for (int y = y0; y < y0 + u; ++y) {
        for (int x = x0; x < x0 + u; ++x) bp.image.set(x, y, bit ? kMaxGray : 0.0);
      }
    }
  }
  return bp;
}

}  // namespace artqr::qab
