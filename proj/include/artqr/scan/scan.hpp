#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "artqr/decode/detector.hpp"
#include "artqr/image.hpp"
#include "artqr/qr/qr.hpp"

namespace artqr::scan {

inline constexpr double kViewingDistanceCm = 20.0;

struct Scenario {
  double display_size_cm = 5.0;
  double angle_deg = 90.0;  // 90 is fronto-parallel
  double dpi = 300.0;       // sensor resolution on the display plane at the centre
  double noise_sigma = 0.0;
  double blur_radius = 0.0;  // Gaussian sigma in sensor pixels
  int trials = 50;
  std::uint64_t seed = 1;
  double display_dpi = 96.0;  // 0 shows the source raster unresampled

  void validate() const;  // throws InvalidArgument
  bool operator==(const Scenario&) const = default;
};

/// Side of the code on the display, in display pixels (source side when display_dpi is 0).
int display_pixels(const Scenario& sc, int source_side);

/// Side of the sensor canvas: the code footprint plus a white border.
int canvas_pixels(const Scenario& sc);

/// Pinhole camera at 20 cm viewing the display tilted by 90 - angle degrees
/// about its horizontal axis. Maps display pixel coordinates (edges at
/// integers) to sensor coordinates.
decode::Homography camera_homography(const Scenario& sc, int display_side);

/// Display resampling, perspective warp (bilinear, white surround), blur, noise.
GrayImage distort(const GrayImage& img, const Scenario& sc, std::mt19937_64& rng);

/// The deterministic part of distort: everything up to the noise.
GrayImage project(const GrayImage& img, const Scenario& sc);

/// Additive N(0, sigma) noise, then clamp and round.
GrayImage add_noise(GrayImage img, double sigma, std::mt19937_64& rng);

/// Per-trial RNG stream derived from (seed, trial).
std::mt19937_64 trial_rng(std::uint64_t seed, int trial);

struct CampaignRow {
  Scenario scenario;
  int successes = 0;
  int trials = 0;
  double rate = 0;
};

struct CampaignReport {
  std::vector<CampaignRow> rows;
};

/// For every scenario, `trials` distort + standard_decode attempts. Success
/// means the decoded bytes equal the expected message; failures to locate or
/// decode only count as misses.
CampaignReport run_campaign(const GrayImage& img, const qr::Message& expected, std::span<const Scenario> scenarios,
                            const decode::DecodeParams& params);

/// Cartesian product sizes x angles, other fields from `base`.
std::vector<Scenario> scenario_grid(std::span<const double> sizes_cm, std::span<const double> angles_deg,
                                    const Scenario& base);

std::vector<Scenario> parse_scenarios(const std::string& json_text);
std::string scenarios_to_json(std::span<const Scenario> scenarios);
std::string report_to_json(const CampaignReport& report);
void write_table(std::ostream& out, const CampaignReport& report);

}  // namespace artqr::scan
