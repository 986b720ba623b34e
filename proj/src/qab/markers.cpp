#include <algorithm>

#include "artqr/error.hpp"
#include "artqr/qab/qab.hpp"

namespace artqr::qab {

std::string_view to_string(MarkerStyle style) {
  return style == MarkerStyle::Square ? "square" : "cross";
}

MarkerStyle parse_marker_style(std::string_view text) {
  if (text == "square") return MarkerStyle::Square;
  if (text == "cross") return MarkerStyle::CrossCenterOnly;
  throw Error(ErrorCode::InvalidArgument, "unknown marker style: " + std::string(text));
}

std::vector<std::uint8_t> cross_center_modules(int version) {
  const qr::Layout& lay = qr::layout_for(version);
  const int n = lay.n;
  std::vector<std::uint8_t> out(static_cast<std::size_t>(n) * n, 0);
  auto mark = [&](int r, int c) {
    if (r >= 0 && c >= 0 && r < n && c < n) out[static_cast<std::size_t>(r) * n + c] = 1;
  };
  for (const auto& [fr, fc] : {std::pair{3, 3}, {3, n - 4}, {n - 4, 3}}) {
    for (int d = -1; d <= 1; ++d) {
      for (int k = -4; k <= 4; ++k) {
        mark(fr + d, fc + k);
        mark(fr + k, fc + d);
      }
    }
  }
  const auto pos = qr::alignment_positions(version);
  for (int ar : pos) {
    for (int ac : pos) {
      if (lay.roles[static_cast<std::size_t>(ar) * n + ac] != qr::ModuleRole::Alignment) continue;
      for (int k = -2; k <= 2; ++k) {
        mark(ar, ac + k);
        mark(ar + k, ac);
      }
    }
  }
  return out;
}

std::size_t CrossCenterMask::count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

CrossCenterMask cross_center_mask(const ModuleGrid& grid, int version, int width, int height) {
  if (qr::side_length(version) != grid.n) throw Error(ErrorCode::DimensionMismatch, "cross_center_mask: version");
  if (grid.origin_x + grid.side_pixels() > width || grid.origin_y + grid.side_pixels() > height ||
      grid.origin_x < 0 || grid.origin_y < 0) {
    throw Error(ErrorCode::GridOutOfBounds, "cross_center_mask: grid outside raster");
  }
  const auto modules = cross_center_modules(version);
  CrossCenterMask m{width, height, std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height, 0)};
  for (int r = 0; r < grid.n; ++r) {
    for (int c = 0; c < grid.n; ++c) {
      if (!modules[static_cast<std::size_t>(r) * grid.n + c]) continue;
      for (int y = 0; y < grid.a; ++y) {
        const int py = grid.origin_y + r * grid.a + y;
        std::fill_n(m.mask.begin() + static_cast<std::ptrdiff_t>(py) * width + grid.origin_x + c * grid.a, grid.a,
                    std::uint8_t{1});
      }
    }
  }
  return m;
}

Blueprint affix_markers(Blueprint bp, MarkerStyle style) {
  const qr::CodeTarget& t = bp.reorganized;
  const ModuleGrid& g = bp.grid;
  g.require_fits(bp.image);
  const auto cross = cross_center_modules(t.version);
  for (int r = 0; r < t.n; ++r) {
    for (int c = 0; c < t.n; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * t.n + c;
      const bool paint = style == MarkerStyle::Square ? qr::is_marker_role(t.roles[i]) : cross[i] != 0;
      if (!paint) continue;
      const double v = t.bits[i] ? kMaxGray : 0.0;
      for (int y = 0; y < g.a; ++y) {
        for (int x = 0; x < g.a; ++x) bp.image.set(g.origin_x + c * g.a + x, g.origin_y + r * g.a + y, v);
      }
      bp.u_map[i] = g.a;
    }
  }
  bp.marker_style = style;
  return bp;
}

}  // namespace artqr::qab
