#include <cmath>
#include <numbers>

#include "artqr/error.hpp"
#include "artqr/scan/scan.hpp"

namespace artqr::scan {

void Scenario::validate() const {
  if (!(display_size_cm > 0)) throw Error(ErrorCode::InvalidArgument, "scenario: display size must be > 0");
  if (!(angle_deg > 0 && angle_deg <= 90)) throw Error(ErrorCode::InvalidArgument, "scenario: angle must be in (0, 90]");
  if (!(dpi > 0)) throw Error(ErrorCode::InvalidArgument, "scenario: dpi must be > 0");
  if (!(noise_sigma >= 0 && blur_radius >= 0 && display_dpi >= 0)) {
    throw Error(ErrorCode::InvalidArgument, "scenario: negative noise, blur or display dpi");
  }
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "scenario: trials must be >= 1");
}

int display_pixels(const Scenario& sc, int source_side) {
  if (sc.display_dpi == 0) return source_side;
  return std::max(1, static_cast<int>(std::lround(sc.display_size_cm / 2.54 * sc.display_dpi)));
}

int canvas_pixels(const Scenario& sc) {
  const int code = static_cast<int>(std::ceil(sc.display_size_cm / 2.54 * sc.dpi));
  return code + 2 * ((code + 7) / 8);
}

decode::Homography camera_homography(const Scenario& sc, int display_side) {
  const double phi = (90.0 - sc.angle_deg) * std::numbers::pi / 180.0;
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  const double d = kViewingDistanceCm;
  const double f = d * sc.dpi / 2.54;
  const double k = sc.display_size_cm / display_side;  // cm per display pixel
  const double h = sc.display_size_cm / 2.0;
  const double centre = canvas_pixels(sc) / 2.0;
  // With X = k px - h, Y = k py - h (cm, origin at the display centre):
  //   u = centre + f X / (D + Y sin), v = centre + f Y cos / (D + Y sin)
  const double w0 = d - s * h;
  decode::Homography hm;
  hm.m = {f * k, centre * s * k, centre * w0 - f * h,
          0.0,   f * c * k + centre * s * k, centre * w0 - f * c * h,
          0.0,   s * k, w0};
  return hm;
}

std::mt19937_64 trial_rng(std::uint64_t seed, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffU), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  return std::mt19937_64(seq);
}

namespace {

double sample_white_outside(const GrayImage& img, double x, double y) {
  const double fx = x - 0.5;
  const double fy = y - 0.5;
  const int x0 = static_cast<int>(std::floor(fx));
  const int y0 = static_cast<int>(std::floor(fy));
  const double tx = fx - x0;
  const double ty = fy - y0;
  auto px = [&](int xx, int yy) {
    if (xx < 0 || yy < 0 || xx >= img.width() || yy >= img.height()) return kMaxGray;
    return img.at(xx, yy);
  };
  return (1 - ty) * ((1 - tx) * px(x0, y0) + tx * px(x0 + 1, y0)) +
         ty * ((1 - tx) * px(x0, y0 + 1) + tx * px(x0 + 1, y0 + 1));
}

GrayImage gaussian_blur(const GrayImage& img, double sigma) {
  const int radius = static_cast<int>(std::ceil(3 * sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0;
  for (int i = -radius; i <= radius; ++i) {
    taps[static_cast<std::size_t>(i + radius)] = std::exp(-i * i / (2 * sigma * sigma));
    sum += taps[static_cast<std::size_t>(i + radius)];
  }
  for (double& t : taps) t /= sum;
  const int w = img.width();
  const int h = img.height();
  GrayImage tmp(w, h);
  GrayImage out(w, h);
  auto clampi = [](int v, int hi) { return std::clamp(v, 0, hi - 1); };
  auto t = tmp.mutable_pixels();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int i = -radius; i <= radius; ++i) acc += taps[static_cast<std::size_t>(i + radius)] * img.at(clampi(x + i, w), y);
      t[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  auto o = out.mutable_pixels();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int i = -radius; i <= radius; ++i) acc += taps[static_cast<std::size_t>(i + radius)] * tmp.at(x, clampi(y + i, h));
      o[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  return out;
}

}  // namespace

// Everything before the noise: deterministic per scenario.
GrayImage project(const GrayImage& img, const Scenario& sc) {
  sc.validate();
  if (img.empty()) throw Error(ErrorCode::InvalidArgument, "distort: empty image");
  const int side = display_pixels(sc, std::max(img.width(), img.height()));
  const GrayImage shown = sc.display_dpi == 0 ? img : resize_area(img, side, side);
  const decode::Homography inv = camera_homography(sc, side).inverse();
  const int canvas = canvas_pixels(sc);
  GrayImage out(canvas, canvas);
  auto o = out.mutable_pixels();
  for (int v = 0; v < canvas; ++v) {
    for (int u = 0; u < canvas; ++u) {
      const auto p = inv.apply(u + 0.5, v + 0.5);
      o[static_cast<std::size_t>(v) * canvas + u] = sample_white_outside(shown, p[0], p[1]);
    }
  }
  return sc.blur_radius > 0 ? gaussian_blur(out, sc.blur_radius) : out;
}

GrayImage add_noise(GrayImage img, double sigma, std::mt19937_64& rng) {
  if (sigma > 0) {
    std::normal_distribution<double> noise(0.0, sigma);
    for (double& v : img.mutable_pixels()) v += noise(rng);
    img.clamp();
  }
  return img.quantized();
}

GrayImage distort(const GrayImage& img, const Scenario& sc, std::mt19937_64& rng) {
  return add_noise(project(img, sc), sc.noise_sigma, rng);
}

}  // namespace artqr::scan
