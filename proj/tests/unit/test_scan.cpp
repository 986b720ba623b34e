#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "artqr/decode/sampler.hpp"
#include "artqr/error.hpp"
#include "artqr/scan/scan.hpp"

namespace artqr::scan {
namespace {

const qr::Message kMsg = qr::Message::from_text("https://example.com/scan");

GrayImage pure_code(int a = 16) { return decode::render_target(qr::encode_message(kMsg), a); }

// Pinhole camera at distance D looking at a plane tilted by phi about its horizontal axis.
std::array<double, 2> pinhole(double x_cm, double y_cm, double phi, double f, double centre) {
  const double z = kViewingDistanceCm + y_cm * std::sin(phi);
  return {centre + f * x_cm / z, centre + f * y_cm * std::cos(phi) / z};
}

TEST(Distort, FrontalMatchingResolutionIsIdentity) {
  Scenario sc;
  sc.display_size_cm = 2.54;
  sc.dpi = 592;  // one sensor pixel per display pixel
  sc.display_dpi = 0;
  const GrayImage img = pure_code();
  EXPECT_EQ(canvas_pixels(sc), 740);
  const GrayImage out = project(img, sc);
  ASSERT_EQ(out.width(), 740);
  for (int y = 0; y < 592; ++y) {
    for (int x = 0; x < 592; ++x) ASSERT_NEAR(out.at(x + 74, y + 74), img.at(x, y), 1e-9);
  }
  EXPECT_EQ(out.at(10, 10), 255.0);
  const decode::DecodeParams p = decode::DecodeParams::defaults_for(16);
  const qr::CodeTarget t = qr::encode_message(kMsg);
  EXPECT_EQ(decode::error_level(out.quantized(), t, decode::ModuleGrid{t.n, 16, 74, 74}, p), 0.0);
}

TEST(Distort, TiltedCornersFollowThePinholeModel) {
  Scenario sc;
  sc.angle_deg = 45;
  const int side = display_pixels(sc, 592);
  EXPECT_EQ(side, static_cast<int>(std::lround(5 / 2.54 * 96)));
  const decode::Homography hm = camera_homography(sc, side);
  const double phi = std::numbers::pi / 4;
  const double f = kViewingDistanceCm * sc.dpi / 2.54;
  const double centre = canvas_pixels(sc) / 2.0;
  for (auto [cx, cy] : {std::pair{0, 0}, {side, 0}, {side, side}, {0, side}}) {
    const auto got = hm.apply(cx, cy);
    const auto want = pinhole(cx * 5.0 / side - 2.5, cy * 5.0 / side - 2.5, phi, f, centre);
    EXPECT_NEAR(got[0], want[0], 0.5);
    EXPECT_NEAR(got[1], want[1], 0.5);
  }

  // The rendered footprint of a black display agrees with the corners.
  sc.display_dpi = 0;
  const GrayImage black(side, side, 0);
  const GrayImage out = project(black, sc);
  const auto top = pinhole(0, -2.5, phi, f, centre);
  const auto bottom = pinhole(0, 2.5, phi, f, centre);
  const int mid_col = static_cast<int>(centre);
  double coverage = 0;
  for (int y = 0; y < out.height(); ++y) coverage += (255 - out.at(mid_col, y)) / 255.0;
  EXPECT_NEAR(coverage, bottom[1] - top[1], 0.5);
  const int mid_row = static_cast<int>(std::floor(pinhole(0, 0, phi, f, centre)[1]));
  const double yc = mid_row + 0.5;
  // invert v(Y) for the row centre, then the row width is 2 f h / z
  const double y_cm = (yc - centre) * kViewingDistanceCm / (f * std::cos(phi) - (yc - centre) * std::sin(phi));
  const double width = 2 * f * 2.5 / (kViewingDistanceCm + y_cm * std::sin(phi));
  coverage = 0;
  for (int x = 0; x < out.width(); ++x) coverage += (255 - out.at(x, mid_row)) / 255.0;
  EXPECT_NEAR(coverage, width, 0.5);
}

TEST(Distort, DeterministicPerSeed) {
  Scenario sc;
  sc.noise_sigma = 10;
  sc.blur_radius = 1;
  sc.angle_deg = 60;
  const GrayImage img = pure_code(8);
  auto r1 = trial_rng(42, 3);
  auto r2 = trial_rng(42, 3);
  auto r3 = trial_rng(42, 4);
  const GrayImage a = distort(img, sc, r1);
  EXPECT_EQ(a, distort(img, sc, r2));
  EXPECT_NE(a, distort(img, sc, r3));
  for (double v : a.pixels()) {
    ASSERT_EQ(v, std::round(v));
    ASSERT_GE(v, 0);
    ASSERT_LE(v, 255);
  }
}

TEST(Distort, InvalidScenariosRejected) {
  const GrayImage img = pure_code(4);
  for (auto mutate : std::vector<void (*)(Scenario&)>{[](Scenario& s) { s.angle_deg = 0; },
                                                      [](Scenario& s) { s.angle_deg = 95; },
                                                      [](Scenario& s) { s.dpi = 0; },
                                                      [](Scenario& s) { s.trials = 0; },
                                                      [](Scenario& s) { s.noise_sigma = -1; }}) {
    Scenario s;
    mutate(s);
    EXPECT_THROW(project(img, s), Error);
  }
}

TEST(Campaign, BenignGridAllSucceedAndIsReproducible) {
  const std::vector<double> sizes{3, 5, 7};
  const std::vector<double> angles{45, 90};
  Scenario base;
  base.trials = 5;
  const auto grid = scenario_grid(sizes, angles, base);
  ASSERT_EQ(grid.size(), 6u);
  EXPECT_EQ(grid[1].display_size_cm, 3);
  EXPECT_EQ(grid[1].angle_deg, 90);
  const GrayImage img = pure_code();
  const decode::DecodeParams p = decode::DecodeParams::defaults_for(16);
  const CampaignReport rep = run_campaign(img, kMsg, grid, p);
  ASSERT_EQ(rep.rows.size(), 6u);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    EXPECT_EQ(rep.rows[i].scenario, grid[i]);
    EXPECT_EQ(rep.rows[i].rate, 1.0);
    EXPECT_EQ(rep.rows[i].successes, rep.rows[i].trials);
  }
  EXPECT_EQ(report_to_json(rep), report_to_json(run_campaign(img, kMsg, grid, p)));
  EXPECT_THROW(run_campaign(img, kMsg, std::vector<Scenario>{}, p), Error);
}

TEST(Campaign, WrongMessageCountsAsFailure) {
  Scenario sc;
  sc.trials = 3;
  const CampaignReport rep = run_campaign(pure_code(), qr::Message::from_text("other"), std::vector{sc},
                                          decode::DecodeParams::defaults_for(16));
  EXPECT_EQ(rep.rows[0].successes, 0);
  const CampaignReport blank =
      run_campaign(GrayImage(100, 100, 255), kMsg, std::vector{sc}, decode::DecodeParams::defaults_for(16));
  EXPECT_EQ(blank.rows[0].rate, 0.0);
}

TEST(Campaign, RateNonIncreasingInNoise) {
  Scenario base;
  base.display_size_cm = 3;
  base.trials = 200;
  base.seed = 11;
  std::vector<Scenario> sweep;
  for (double sigma : {0.0, 60.0, 90.0, 120.0, 150.0}) {
    Scenario s = base;
    s.noise_sigma = sigma;
    sweep.push_back(s);
  }
  const CampaignReport rep = run_campaign(pure_code(), kMsg, sweep, decode::DecodeParams::defaults_for(16));
  const double step = 1.0 / base.trials;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    EXPECT_LE(rep.rows[i].rate, rep.rows[i - 1].rate + step) << rep.rows[i].scenario.noise_sigma;
  }
  for (const auto& r : rep.rows) {
    EXPECT_GE(r.rate, 0.0);
    EXPECT_LE(r.rate, 1.0);
    EXPECT_LE(r.successes, r.trials);
  }
  EXPECT_EQ(rep.rows.front().rate, 1.0);
  EXPECT_LT(rep.rows.back().rate, 1.0);
}

TEST(Json, ScenarioRoundTripAndDefaults) {
  Scenario a;
  a.display_size_cm = 7;
  a.angle_deg = 45;
  a.noise_sigma = 4;
  a.blur_radius = 1;
  a.seed = 1234567890123ULL;
  Scenario b;
  b.trials = 3;
  const std::vector<Scenario> list{a, b};
  EXPECT_EQ(parse_scenarios(scenarios_to_json(list)), list);
  const auto parsed = parse_scenarios(R"([{"angle_deg": 60}])");
  ASSERT_EQ(parsed.size(), 1u);
  EXPECT_EQ(parsed[0].angle_deg, 60);
  EXPECT_EQ(parsed[0].dpi, Scenario{}.dpi);
}

TEST(Json, InvalidInputIsInvalidArgument) {
  for (const char* bad : {"{", "{}", "[1]", R"([{"angle_deg": 0}])", R"([{"trials": "many"}])"}) {
    try {
      parse_scenarios(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidArgument) << bad;
    }
  }
}

TEST(Report, TableHasOneLinePerRow) {
  CampaignReport rep;
  rep.rows.push_back({Scenario{}, 49, 50, 0.98});
  rep.rows.push_back({Scenario{}, 50, 50, 1.0});
  std::ostringstream out;
  write_table(out, rep);
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  EXPECT_NE(text.find("49/50"), std::string::npos);
  EXPECT_NE(report_to_json(rep).find("\"rate\""), std::string::npos);
}

}  // namespace
}  // namespace artqr::scan
