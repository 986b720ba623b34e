#include <algorithm>
#include <cmath>

#include "artqr/error.hpp"
#include "artqr/qab/qab.hpp"

namespace artqr::qab {

namespace {

GrayImage fit_square(const GrayImage& img, int side) {
  const int s = std::min(img.width(), img.height());
  const int x0 = (img.width() - s) / 2;
  const int y0 = (img.height() - s) / 2;
  GrayImage crop(s, s);
  for (int y = 0; y < s; ++y) {
    for (int x = 0; x < s; ++x) crop.set(x, y, img.at(x0 + x, y0 + y));
  }
  return s == side ? crop : resize_area(crop, side, side);
}

// |white fraction - 1/2| per module: how clearly the guidance picks a colour.
std::vector<double> module_confidence(const GrayImage& hc, const ModuleGrid& grid, const DecodeParams& params) {
  std::vector<double> conf(static_cast<std::size_t>(grid.n) * grid.n);
  const double area = static_cast<double>(grid.a) * grid.a;
  for (int r = 0; r < grid.n; ++r) {
    for (int c = 0; c < grid.n; ++c) {
      int white = 0;
      for (int y = 0; y < grid.a; ++y) {
        for (int x = 0; x < grid.a; ++x) {
          white += params.classify(hc.at(grid.origin_x + c * grid.a + x, grid.origin_y + r * grid.a + y)) == 1;
        }
      }
      conf[static_cast<std::size_t>(r) * grid.n + c] = std::abs(white / area - 0.5);
    }
  }
  return conf;
}

}  // namespace

Blueprint make_blueprint(const GrayImage& guidance, const qr::Message& msg, const DecodeParams& params,
                         const BlueprintOptions& opts) {
  if (guidance.empty()) throw Error(ErrorCode::InvalidArgument, "make_blueprint: empty guidance image");
  if (opts.module_px < 1) throw Error(ErrorCode::InvalidArgument, "make_blueprint: module size < 1");
  if (params.window() > opts.module_px) {
    throw Error(ErrorCode::InvalidArgument, "make_blueprint: sampling window larger than module");
  }
  const qr::CodeTarget target = qr::encode_message(msg, opts.mask);
  const ModuleGrid grid{target.n, opts.module_px, 0, 0};
  const GrayImage guide = fit_square(guidance, grid.side_pixels());

  const Polarized pol = histogram_polarize(guide, params);
  const ModuleBits desired = binarize_per_module(pol.image, grid, params, target);
  const qr::FreeBitBasis basis = qr::compute_free_bit_basis(msg, target);
  const auto priority = module_confidence(pol.image, grid, params);
  const qr::CodeTarget reorganized = module_reorganize(target, desired, basis, priority);

  const int u_min = std::clamp(std::max(opts.u_min, params.window()), 0, opts.module_px);
  Blueprint bp = adaptive_halftone(pol.image, reorganized, grid, params, u_min);
  return affix_markers(std::move(bp), opts.style);
}

}  // namespace artqr::qab
