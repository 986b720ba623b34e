#include <cmath>

#include "artqr/error.hpp"
#include "artqr/refine/refine.hpp"

namespace artqr::refine {

void LossWeights::validate() const {
  if (!(lambda1 >= 0 && lambda2 >= 0 && lambda3 >= 0)) {
    throw Error(ErrorCode::InvalidArgument, "loss weights must be non-negative");
  }
}

namespace {

// Normalized 1-D Gaussian taps over the sampling window, sigma = x / 2.
std::vector<double> window_taps(int x) {
  std::vector<double> t(static_cast<std::size_t>(x));
  const double sigma = x / 2.0;
  const double mid = (x - 1) / 2.0;
  double sum = 0;
  for (int j = 0; j < x; ++j) {
    const double d = j - mid;
    t[static_cast<std::size_t>(j)] = std::exp(-d * d / (2 * sigma * sigma));
    sum += t[static_cast<std::size_t>(j)];
  }
  for (double& v : t) v /= sum;
  return t;
}

}  // namespace

LossValue code_loss(const GrayImage& img, const qr::CodeTarget& target, const ModuleGrid& grid,
                    const DecodeParams& params, double margin) {
  grid.require_fits(img);
  if (target.n != grid.n) throw Error(ErrorCode::DimensionMismatch, "code_loss: target and grid disagree on n");
  const int x = params.window();
  if (x > grid.a) throw Error(ErrorCode::InvalidArgument, "code_loss: sampling window larger than module");
  const auto taps = window_taps(x);
  const int off = decode::centered_offset(grid.a, x);
  const double white_goal = params.tw() + margin;
  const double black_goal = params.tb() - margin;
  constexpr double kNorm = 1.0 / (static_cast<double>(kGrayLevels) * kGrayLevels);

  LossValue out;
  out.grad.assign(img.size(), 0.0);
  const std::size_t w = static_cast<std::size_t>(img.width());
  for (int r = 0; r < grid.n; ++r) {
    for (int c = 0; c < grid.n; ++c) {
      if (!code_loss_module(target.role(r, c))) continue;
      const int x0 = grid.origin_x + c * grid.a + off;
      const int y0 = grid.origin_y + r * grid.a + off;
      double v = 0;
      for (int i = 0; i < x; ++i) {
        for (int j = 0; j < x; ++j) v += taps[static_cast<std::size_t>(i)] * taps[static_cast<std::size_t>(j)] * img.at(x0 + j, y0 + i);
      }
      // Modules already past their threshold contribute nothing; NaN propagates.
      const double h = target.bit(r, c) ? std::max(white_goal - v, 0.0) : std::max(v - black_goal, 0.0);
      if (h == 0.0) continue;
      out.value += h * h * kNorm;
      const double dv = (target.bit(r, c) ? -2.0 : 2.0) * h * kNorm;
      for (int i = 0; i < x; ++i) {
        for (int j = 0; j < x; ++j) {
          out.grad[static_cast<std::size_t>(y0 + i) * w + static_cast<std::size_t>(x0 + j)] +=
              dv * taps[static_cast<std::size_t>(i)] * taps[static_cast<std::size_t>(j)];
        }
      }
    }
  }
  return out;
}

LossValue marker_loss(const GrayImage& img, const qab::Blueprint& blueprint, const qab::CrossCenterMask& mask) {
  if (img.width() != blueprint.image.width() || img.height() != blueprint.image.height() ||
      img.width() != mask.width || img.height() != mask.height) {
    throw Error(ErrorCode::DimensionMismatch, "marker_loss: image, blueprint and mask sizes differ");
  }
  LossValue out;
  out.grad.assign(img.size(), 0.0);
  const std::size_t count = mask.count();
  if (count == 0) return out;
  const auto q = img.pixels();
  const auto b = blueprint.image.pixels();
  const double inv = 1.0 / static_cast<double>(count);
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!mask.mask[i]) continue;
    const double d = q[i] - b[i];
    out.value += d * d * inv;
    out.grad[i] = 2.0 * d * inv;
  }
  return out;
}

}  // namespace artqr::refine
