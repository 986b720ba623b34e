#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "artqr/image.hpp"
#include "artqr/refine/refine.hpp"
#include <functional>

namespace artqr::testing {

struct NamedImage {
  std::string name;
  GrayImage image;
};

std::filesystem::path data_dir();

// 15 procedural textures, side x side.
std::vector<NamedImage> procedural_textures(int side);

// The five photographs shipped in tests/data.
std::vector<NamedImage> photographs();

// 15 textures followed by the 5 photographs.
std::vector<NamedImage> guidance_set(int side);

GrayImage uniform_noise_image(int w, int h, std::mt19937_64& rng);

// img + N(0, sigma), clamped and rounded.
GrayImage with_gaussian_noise(const GrayImage& img, double sigma, std::uint64_t seed);

// alpha * a + (1 - alpha) * b, rounded. b is area-resampled to a's size.
GrayImage alpha_blend(const GrayImage& a, const GrayImage& b, double alpha);

std::string random_text(std::mt19937_64& rng, std::size_t length);

// Fresh directory under the system temp path.
std::filesystem::path scratch_dir(const std::string& tag);

struct FdCheck {
  double max_relative_error = 0;
  double max_abs_gradient = 0;
  int probes = 0;
};

// Central differences of `loss` at `probes` pixels drawn from `candidates`
// (all pixels when empty), compared with the analytic gradient.
FdCheck finite_difference_check(const std::function<refine::LossValue(const GrayImage&)>& loss, const GrayImage& img,
                                int probes, double h, std::uint64_t seed, std::vector<std::size_t> candidates = {});

}  // namespace artqr::testing
