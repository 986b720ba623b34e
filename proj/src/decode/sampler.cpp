#include "artqr/decode/sampler.hpp"

#include <cmath>
#include <numeric>
#include <ostream>

#include "artqr/error.hpp"

namespace artqr::decode {

bool ModuleGrid::fits(const GrayImage& img) const {
  return n > 0 && a >= 1 && origin_x >= 0 && origin_y >= 0 && origin_x + n * a <= img.width() &&
         origin_y + n * a <= img.height();
}

void ModuleGrid::require_fits(const GrayImage& img) const {
  if (!fits(img)) {
    throw Error(ErrorCode::GridOutOfBounds, "grid of " + std::to_string(n) + "x" + std::to_string(a) +
                                                " px at (" + std::to_string(origin_x) + "," +
                                                std::to_string(origin_y) + ") exceeds " +
                                                std::to_string(img.width()) + "x" + std::to_string(img.height()));
  }
}

Rational Rational::from_double(double v) {
  constexpr std::int64_t kDen = 1'000'000;
  Rational r{std::llround(v * static_cast<double>(kDen)), kDen};
  const std::int64_t g = std::gcd(r.num, r.den);
  if (g > 1) {
    r.num /= g;
    r.den /= g;
  }
  return r;
}

DecodeParams::DecodeParams(double eta, int window) : DecodeParams(Rational::from_double(eta), window) {}

DecodeParams::DecodeParams(Rational eta, int window) : eta_(eta), window_(window) {
  if (eta_.den <= 0 || eta_.num <= 0 || eta_.num >= eta_.den) {
    throw Error(ErrorCode::InvalidArgument, "eta must lie strictly between 0 and 1");
  }
  if (window_ < 1) throw Error(ErrorCode::InvalidArgument, "sampling window must be at least 1 pixel");
}

DecodeParams DecodeParams::defaults_for(int module_px, double eta) {
  return DecodeParams(eta, default_window(module_px));
}

double DecodeParams::tb() const noexcept {
  return kGrayLevels * static_cast<double>(eta_.den - eta_.num) / (2.0 * static_cast<double>(eta_.den));
}

double DecodeParams::tw() const noexcept {
  return kGrayLevels * static_cast<double>(eta_.den + eta_.num) / (2.0 * static_cast<double>(eta_.den));
}

int DecodeParams::classify_sum(double sum, std::int64_t count) const {
  // sum / count <= L (den - num) / (2 den)  <=>  2 den sum <= count L (den - num)
  const long double lhs = 2.0L * static_cast<long double>(eta_.den) * static_cast<long double>(sum);
  const long double scale = static_cast<long double>(count) * kGrayLevels;
  if (lhs <= scale * static_cast<long double>(eta_.den - eta_.num)) return 0;
  if (lhs >= scale * static_cast<long double>(eta_.den + eta_.num)) return 1;
  return -1;
}

TriMatrix sample_decode(const GrayImage& img, const ModuleGrid& grid, const DecodeParams& params) {
  grid.require_fits(img);
  const int x = params.window();
  if (x > grid.a) throw Error(ErrorCode::InvalidArgument, "sampling window larger than module");
  const int off = centered_offset(grid.a, x);
  const auto px = img.pixels();
  const std::size_t w = static_cast<std::size_t>(img.width());

  TriMatrix tri;
  tri.n = grid.n;
  tri.values.resize(static_cast<std::size_t>(grid.n) * grid.n);
  for (int r = 0; r < grid.n; ++r) {
    for (int c = 0; c < grid.n; ++c) {
      const int x0 = grid.origin_x + c * grid.a + off;
      const int y0 = grid.origin_y + r * grid.a + off;
      double sum = 0;
      for (int dy = 0; dy < x; ++dy) {
        const double* row = px.data() + static_cast<std::size_t>(y0 + dy) * w + x0;
        for (int dx = 0; dx < x; ++dx) sum += row[dx];
      }
      tri.values[static_cast<std::size_t>(r) * grid.n + c] =
          static_cast<std::int8_t>(params.classify_sum(sum, static_cast<std::int64_t>(x) * x));
    }
  }
  return tri;
}

int data_module_count(const qr::CodeTarget& target) {
  int count = 0;
  for (qr::ModuleRole r : target.roles) count += qr::is_function_role(r) ? 0 : 1;
  return count;
}

double error_level(const GrayImage& img, const qr::CodeTarget& target, const ModuleGrid& grid,
                   const DecodeParams& params) {
  if (target.n != grid.n) throw Error(ErrorCode::DimensionMismatch, "target and grid disagree on n");
  const TriMatrix tri = sample_decode(img, grid, params);
  int total = 0;
  int wrong = 0;
  for (std::size_t i = 0; i < target.bits.size(); ++i) {
    if (qr::is_function_role(target.roles[i])) continue;
    ++total;
    if (tri.values[i] != static_cast<std::int8_t>(target.bits[i])) ++wrong;
  }
  return total == 0 ? 0.0 : static_cast<double>(wrong) / total;
}

void write_pbm(std::ostream& out, const TriMatrix& tri) {
  out << "P1\n" << tri.n << ' ' << tri.n << '\n';
  for (int r = 0; r < tri.n; ++r) {
    for (int c = 0; c < tri.n; ++c) out << (tri.at(r, c) == 1 ? '0' : '1') << (c + 1 < tri.n ? " " : "");
    out << '\n';
  }
}

GrayImage render_target(const qr::CodeTarget& target, int module_px, int quiet_zone) {
  if (module_px < 1 || quiet_zone < 0) throw Error(ErrorCode::InvalidArgument, "bad render geometry");
  const int side = (target.n + 2 * quiet_zone) * module_px;
  GrayImage img(side, side, kMaxGray);
  auto px = img.mutable_pixels();
  for (int y = 0; y < side; ++y) {
    const int r = y / module_px - quiet_zone;
    for (int x = 0; x < side; ++x) {
      const int c = x / module_px - quiet_zone;
      if (r < 0 || c < 0 || r >= target.n || c >= target.n) continue;
      px[static_cast<std::size_t>(y) * side + x] = target.bit(r, c) ? kMaxGray : 0.0;
    }
  }
  return img;
}

}  // namespace artqr::decode
