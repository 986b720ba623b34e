#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "artqr/png_io.hpp"

namespace artqr::testing {

namespace {

using Shader = double (*)(double, double, std::mt19937_64&);

// Smooth value noise on a coarse lattice.
GrayImage value_noise(int side, int cells, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  std::vector<double> lattice(static_cast<std::size_t>(cells + 1) * (cells + 1));
  for (double& v : lattice) v = u(rng);
  GrayImage img(side, side);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const double fx = static_cast<double>(x) / side * cells;
      const double fy = static_cast<double>(y) / side * cells;
      const int ix = static_cast<int>(fx);
      const int iy = static_cast<int>(fy);
      const double tx = fx - ix;
      const double ty = fy - iy;
      const double sx = tx * tx * (3 - 2 * tx);
      const double sy = ty * ty * (3 - 2 * ty);
      auto at = [&](int i, int j) { return lattice[static_cast<std::size_t>(j) * (cells + 1) + i]; };
      const double top = at(ix, iy) * (1 - sx) + at(ix + 1, iy) * sx;
      const double bottom = at(ix, iy + 1) * (1 - sx) + at(ix + 1, iy + 1) * sx;
      img.set(x, y, std::round(top * (1 - sy) + bottom * sy));
    }
  }
  return img;
}

template <typename F>
GrayImage shade(int side, F f) {
  GrayImage img(side, side);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const double u = (x + 0.5) / side;
      const double v = (y + 0.5) / side;
      img.set(x, y, std::round(std::clamp(f(u, v), 0.0, 1.0) * 255.0));
    }
  }
  return img;
}

}  // namespace

std::filesystem::path data_dir() { return ARTQR_TEST_DATA; }

std::vector<NamedImage> procedural_textures(int side) {
  using std::numbers::pi;
  std::vector<NamedImage> out;
  out.push_back({"ramp_h", shade(side, [](double u, double) { return u; })});
  out.push_back({"ramp_v", shade(side, [](double, double v) { return 1 - v; })});
  out.push_back({"radial", shade(side, [](double u, double v) { return 1 - 1.4 * std::hypot(u - 0.5, v - 0.5); })});
  out.push_back({"checker_8", shade(side, [](double u, double v) {
                   return ((static_cast<int>(u * 8) + static_cast<int>(v * 8)) % 2) ? 0.9 : 0.1;
                 })});
  out.push_back({"checker_23", shade(side, [](double u, double v) {
                   return ((static_cast<int>(u * 23) + static_cast<int>(v * 23)) % 2) ? 1.0 : 0.0;
                 })});
  out.push_back({"sine_x", shade(side, [](double u, double) { return 0.5 + 0.5 * std::sin(2 * pi * 6 * u); })});
  out.push_back({"sine_xy", shade(side, [](double u, double v) {
                   return 0.5 + 0.25 * std::sin(2 * pi * 5 * u) + 0.25 * std::cos(2 * pi * 3 * v);
                 })});
  out.push_back({"rings", shade(side, [](double u, double v) {
                   return 0.5 + 0.5 * std::cos(2 * pi * 9 * std::hypot(u - 0.5, v - 0.5));
                 })});
  out.push_back({"stripes_diag", shade(side, [](double u, double v) {
                   return std::fmod(4 * (u + v), 1.0) < 0.5 ? 0.15 : 0.85;
                 })});
  out.push_back({"spiral", shade(side, [](double u, double v) {
                   const double r = std::hypot(u - 0.5, v - 0.5);
                   const double t = std::atan2(v - 0.5, u - 0.5);
                   return 0.5 + 0.5 * std::sin(3 * t + 40 * r);
                 })});
  out.push_back({"spots", shade(side, [](double u, double v) {
                   const double du = std::fmod(u * 6, 1.0) - 0.5;
                   const double dv = std::fmod(v * 6, 1.0) - 0.5;
                   return std::hypot(du, dv) < 0.3 ? 0.05 : 0.95;
                 })});
  out.push_back({"mid_gray", shade(side, [](double, double) { return 0.5; })});
  out.push_back({"vignette", shade(side, [](double u, double v) {
                   return 0.8 * std::exp(-8 * ((u - 0.4) * (u - 0.4) + (v - 0.6) * (v - 0.6)));
                 })});
  out.push_back({"noise_coarse", value_noise(side, 6, 11)});
  out.push_back({"noise_fine", value_noise(side, 29, 12)});
  return out;
}

std::vector<NamedImage> photographs() {
  std::vector<NamedImage> out;
  for (const char* name : {"astronaut", "camera", "chelsea", "coffee", "rocket"}) {
    out.push_back({name, read_png(data_dir() / (std::string("photo_") + name + ".png")).to_gray()});
  }
  return out;
}

std::vector<NamedImage> guidance_set(int side) {
  auto out = procedural_textures(side);
  for (auto& p : photographs()) out.push_back(std::move(p));
  return out;
}

GrayImage uniform_noise_image(int w, int h, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 255.0);
  GrayImage img(w, h);
  for (double& v : img.mutable_pixels()) v = u(rng);
  return img;
}

GrayImage with_gaussian_noise(const GrayImage& img, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, sigma);
  GrayImage out = img;
  for (double& v : out.mutable_pixels()) v += n(rng);
  out.clamp();
  return out.quantized();
}

GrayImage alpha_blend(const GrayImage& a, const GrayImage& b, double alpha) {
  const GrayImage bb = b.width() == a.width() && b.height() == a.height() ? b : resize_area(b, a.width(), a.height());
  GrayImage out(a.width(), a.height());
  auto o = out.mutable_pixels();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = alpha * a.pixels()[i] + (1 - alpha) * bb.pixels()[i];
  return out.quantized();
}

std::string random_text(std::mt19937_64& rng, std::size_t length) {
  std::uniform_int_distribution<int> byte(0, 255);
  std::string s(length, '\0');
  for (char& c : s) c = static_cast<char>(byte(rng));
  return s;
}

std::filesystem::path scratch_dir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  auto dir = std::filesystem::temp_directory_path() / ("artqr_" + tag + "_" + std::to_string(rng() % 1000000007));
  std::filesystem::create_directories(dir);
  return dir;
}

FdCheck finite_difference_check(const std::function<refine::LossValue(const GrayImage&)>& loss, const GrayImage& img,
                                int probes, double h, std::uint64_t seed, std::vector<std::size_t> candidates) {
  if (candidates.empty()) {
    candidates.resize(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) candidates[i] = i;
  }
  const refine::LossValue base = loss(img);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  FdCheck out;
  out.probes = probes;
  for (int k = 0; k < probes; ++k) {
    const std::size_t i = candidates[pick(rng)];
    GrayImage plus = img;
    GrayImage minus = img;
    plus.mutable_pixels()[i] += h;
    minus.mutable_pixels()[i] -= h;
    const double fd = (loss(plus).value - loss(minus).value) / (2 * h);
    const double g = base.grad[i];
    const double scale = std::max(std::abs(g), std::abs(fd));
    out.max_abs_gradient = std::max(out.max_abs_gradient, std::abs(g));
    if (scale > 0) out.max_relative_error = std::max(out.max_relative_error, std::abs(g - fd) / scale);
  }
  return out;
}

}  // namespace artqr::testing
