#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "artqr/decode/detector.hpp"
#include "artqr/error.hpp"
#include "artqr/qab/qab.hpp"
#include "artqr/qr/free_basis.hpp"
#include "test_support.hpp"

namespace artqr::qab {
namespace {

const DecodeParams kParams(0.6, 5);

bool in_dead_zone(double v, const DecodeParams& p) { return v > p.tb() && v < p.tw(); }

// E(u) straight from its definition, in doubles.
int enumerate_halftone(const GrayImage& hc, int x0, int y0, int a, int bit, const DecodeParams& p, int u_min) {
  const double fill = bit ? 255.0 : 0.0;
  const double target = bit ? p.tw() : p.tb();
  int best_u = -1;
  double best = 0;
  for (int u = u_min; u <= a; ++u) {
    const int off = (a - u) / 2;
    double sum = 0;
    for (int y = 0; y < a; ++y) {
      for (int x = 0; x < a; ++x) {
        const bool inside = x >= off && x < off + u && y >= off && y < off + u;
        sum += inside ? fill : hc.at(x0 + x, y0 + y);
      }
    }
    const double dist = std::abs(sum / (a * a) - target);
    if (best_u < 0 || dist < best - 1e-9) {
      best = dist;
      best_u = u;
    }
  }
  return best_u;
}

TEST(Polarize, ConstantImageMapsToWhite) {
  const Polarized p = histogram_polarize(GrayImage(20, 10, 100), kParams);
  for (double v : p.image.pixels()) EXPECT_EQ(v, 255);
  EXPECT_EQ(p.map(100), 255);
}

TEST(Polarize, RampEmptiesTheDeadZone) {
  GrayImage ramp(256, 4);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 256; ++x) ramp.set(x, y, x);
  }
  const Polarized p = histogram_polarize(ramp, kParams);
  std::array<int, 256> hist{};
  for (double v : p.image.pixels()) ++hist[static_cast<std::size_t>(v)];
  for (int level = 52; level <= 204; ++level) EXPECT_EQ(hist[static_cast<std::size_t>(level)], 0) << level;
  EXPECT_EQ(p.map(255), 255);
  EXPECT_GT(hist[0] + hist[51], 0);
}

TEST(Polarize, MonotoneAndOutsideDeadZoneForManyEta) {
  const auto images = testing::procedural_textures(64);
  for (double eta : {0.1, 0.33, 0.6, 0.9}) {
    const DecodeParams p(eta, 1);
    for (const auto& [name, img] : images) {
      const Polarized pol = histogram_polarize(img, p);
      for (int level = 1; level < 256; ++level) ASSERT_LE(pol.map(level - 1), pol.map(level)) << name;
      for (double v : pol.image.pixels()) ASSERT_FALSE(in_dead_zone(v, p)) << name << " eta " << eta;
    }
  }
}

TEST(Polarize, EmptyImageRejected) { EXPECT_THROW(histogram_polarize(GrayImage(), kParams), Error); }

TEST(Binarize, UniformBlocksAndTies) {
  const qr::CodeTarget t = qr::encode_message(qr::Message::from_text("bin", qr::EcLevel::L, 1));
  const int a = 4;
  const ModuleGrid grid{t.n, a, 0, 0};
  GrayImage img(t.n * a, t.n * a, 0);
  // module (0,0) all white, (0,1) half/half, the rest black
  for (int y = 0; y < a; ++y) {
    for (int x = 0; x < a; ++x) img.set(x, y, 255);
    for (int x = 0; x < a / 2; ++x) img.set(a + x, y, 255);
  }
  const ModuleBits bits = binarize_per_module(img, grid, kParams, t);
  EXPECT_EQ(bits.at(0, 0), 1);
  EXPECT_EQ(bits.at(0, 1), t.bit(0, 1));
  EXPECT_EQ(bits.at(5, 5), 0);

  qr::CodeTarget flipped = t;
  flipped.set_bit(0, 1, t.bit(0, 1) ^ 1);
  EXPECT_EQ(binarize_per_module(img, grid, kParams, flipped).at(0, 1), flipped.bit(0, 1));
}

TEST(Binarize, DeadZonePixelThrows) {
  const qr::CodeTarget t = qr::encode_message(qr::Message::from_text("bin", qr::EcLevel::L, 1));
  GrayImage img(21 * 3, 21 * 3, 0);
  img.set(30, 30, 128);
  try {
    binarize_per_module(img, ModuleGrid{21, 3, 0, 0}, kParams, t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DeadZonePixels);
  }
}

struct ReorgFixture {
  qr::Message msg = qr::Message::from_text("https://example.com/aesthetic-qr");
  qr::CodeTarget target = qr::encode_message(msg, 0);
  qr::FreeBitBasis basis = qr::compute_free_bit_basis(msg, target);
};

TEST(Reorganize, AlreadyOptimalTargetIsKept) {
  const ReorgFixture f;
  const ModuleBits desired{f.target.n, f.target.bits};
  EXPECT_EQ(module_reorganize(f.target, desired, f.basis), f.target);
}

TEST(Reorganize, RandomDesiredPatterns) {
  const ReorgFixture f;
  std::mt19937_64 rng(50);
  int strict = 0;
  for (int trial = 0; trial < 50; ++trial) {
    ModuleBits desired{f.target.n, std::vector<std::uint8_t>(f.target.bits.size())};
    for (auto& b : desired.bits) b = static_cast<std::uint8_t>(rng() & 1U);
    const qr::CodeTarget r = module_reorganize(f.target, desired, f.basis);
    EXPECT_EQ(qr::rs_decode_payload(r), f.msg);
    const int before = data_distance(f.target, desired);
    const int after = data_distance(r, desired);
    EXPECT_LE(after, before);
    strict += after < before;
    for (std::size_t i = 0; i < r.bits.size(); ++i) {
      if (qr::is_function_role(r.roles[i])) ASSERT_EQ(r.bits[i], f.target.bits[i]);
    }
  }
  EXPECT_GE(strict, 45);
}

TEST(Reorganize, PriorityModulesMatchedFirst) {
  const ReorgFixture f;
  std::mt19937_64 rng(9);
  ModuleBits desired{f.target.n, std::vector<std::uint8_t>(f.target.bits.size())};
  for (auto& b : desired.bits) b = static_cast<std::uint8_t>(rng() & 1U);
  // Boosting the modules one basis vector controls makes them match.
  std::vector<double> priority(f.target.bits.size(), 0.0);
  const auto& v = f.basis.vectors.front();
  std::vector<std::size_t> hot;
  for (std::size_t i = 0; i < priority.size() && hot.size() < 1; ++i) {
    if (v.get(i)) {
      priority[i] = 1.0;
      hot.push_back(i);
    }
  }
  const qr::CodeTarget r = module_reorganize(f.target, desired, f.basis, priority);
  for (std::size_t i : hot) EXPECT_EQ(r.bits[i], desired.bits[i]);
  EXPECT_EQ(qr::rs_decode_payload(r), f.msg);
}

TEST(Reorganize, RankZeroBasisLeavesTargetUnchanged) {
  const qr::Message msg{std::vector<std::uint8_t>(static_cast<std::size_t>(qr::byte_capacity(5, qr::EcLevel::H)), 'z'),
                        qr::EcLevel::H, 5};
  const qr::CodeTarget t = qr::encode_message(msg);
  const qr::FreeBitBasis basis = qr::compute_free_bit_basis(msg, t);
  ASSERT_EQ(basis.rank(), 0u);
  ModuleBits desired{t.n, t.bits};
  for (auto& b : desired.bits) b ^= 1;
  EXPECT_EQ(module_reorganize(t, desired, basis), t);
}

TEST(Halftone, BlackPatchWhiteTarget) {
  const GrayImage patch(16, 16, 0);
  const ModuleGrid grid{1, 16, 0, 0};
  EXPECT_EQ(halftone_size(patch, grid, 0, 0, 1, kParams, 0), 14);
  EXPECT_EQ(enumerate_halftone(patch, 0, 0, 16, 1, kParams, 0), 14);
}

TEST(Halftone, WhitePatchWhiteTargetTakesSmallestSize) {
  const GrayImage patch(16, 16, 255);
  EXPECT_EQ(halftone_size(patch, ModuleGrid{1, 16, 0, 0}, 0, 0, 1, kParams, 4), 4);
  EXPECT_EQ(halftone_size(patch, ModuleGrid{1, 16, 0, 0}, 0, 0, 1, kParams, 0), 0);
}

TEST(Halftone, MatchesEnumerationOracle) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const int a = 6 + static_cast<int>(rng() % 14);
    GrayImage patch(a, a);
    for (auto& v : patch.mutable_pixels()) v = (rng() & 1U) ? static_cast<double>(rng() % 52) : 205.0 + rng() % 51;
    const int bit = static_cast<int>(rng() & 1U);
    const int u_min = static_cast<int>(rng() % 5);
    EXPECT_EQ(halftone_size(patch, ModuleGrid{1, a, 0, 0}, 0, 0, bit, kParams, u_min),
              enumerate_halftone(patch, 0, 0, a, bit, kParams, u_min));
  }
}

TEST(Halftone, FullModuleGivesFillExactly) {
  const qr::CodeTarget t = qr::encode_message(qr::Message::from_text("fill", qr::EcLevel::L, 1));
  const int a = 6;
  const ModuleGrid grid{t.n, a, 0, 0};
  GrayImage hc(t.n * a, t.n * a, 0);
  const Blueprint bp = adaptive_halftone(hc, t, grid, kParams, a);
  for (int r = 0; r < t.n; ++r) {
    for (int c = 0; c < t.n; ++c) {
      double sum = 0;
      for (int y = 0; y < a; ++y) {
        for (int x = 0; x < a; ++x) sum += bp.image.at(c * a + x, r * a + y);
      }
      EXPECT_EQ(sum / (a * a), 255.0 * t.bit(r, c));
    }
  }
}

TEST(Halftone, PixelsOutsideControlSquaresUntouched) {
  const qr::CodeTarget t = qr::encode_message(qr::Message::from_text("outside"));
  const int a = 12;
  const ModuleGrid grid{t.n, a, 0, 0};
  std::mt19937_64 rng(1);
  const GrayImage hc = histogram_polarize(testing::uniform_noise_image(t.n * a, t.n * a, rng), kParams).image;
  const Blueprint bp = adaptive_halftone(hc, t, grid, kParams);
  for (int y = 0; y < hc.height(); ++y) {
    for (int x = 0; x < hc.width(); ++x) {
      const int r = y / a;
      const int c = x / a;
      const int u = bp.u(r, c);
      ASSERT_GE(u, kDefaultMinControl);
      ASSERT_LE(u, a);
      const int off = (a - u) / 2;
      const bool inside = x % a >= off && x % a < off + u && y % a >= off && y % a < off + u;
      if (inside) {
        ASSERT_EQ(bp.image.at(x, y), 255.0 * t.bit(r, c));
      } else {
        ASSERT_EQ(bp.image.at(x, y), hc.at(x, y));
      }
    }
  }
}

Blueprint noise_blueprint(int a) {
  const qr::CodeTarget t = qr::encode_message(qr::Message::from_text("markers"));
  std::mt19937_64 rng(2);
  const GrayImage hc = histogram_polarize(testing::uniform_noise_image(t.n * a, t.n * a, rng), kParams).image;
  return adaptive_halftone(hc, t, ModuleGrid{t.n, a, 0, 0}, kParams);
}

std::vector<int> runs(const std::vector<double>& line) {
  std::vector<int> out;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (i == 0 || line[i] != line[i - 1]) out.push_back(0);
    ++out.back();
  }
  return out;
}

TEST(Markers, FinderCentreLinesHaveOneOneThreeOneOne) {
  const int a = 16;
  const Blueprint bp = affix_markers(noise_blueprint(a), MarkerStyle::Square);
  const int n = bp.grid.n;
  for (auto [fr, fc] : {std::pair{3, 3}, {3, n - 4}, {n - 4, 3}}) {
    const int cy = fr * a + a / 2;
    const int cx = fc * a + a / 2;
    std::vector<double> row;
    std::vector<double> col;
    for (int k = (fc - 3) * a; k < (fc + 4) * a; ++k) row.push_back(bp.image.at(k, cy));
    for (int k = (fr - 3) * a; k < (fr + 4) * a; ++k) col.push_back(bp.image.at(cx, k));
    const std::vector<int> expect{a, a, 3 * a, a, a};
    EXPECT_EQ(runs(row), expect);
    EXPECT_EQ(runs(col), expect);
    EXPECT_EQ(bp.image.at(cx, cy), 0.0);
  }
}

TEST(Markers, AlignmentPatternAtStandardPosition) {
  const int a = 8;
  const Blueprint bp = affix_markers(noise_blueprint(a), MarkerStyle::Square);
  for (int r = 28; r <= 32; ++r) {
    for (int c = 28; c <= 32; ++c) {
      EXPECT_EQ(bp.reorganized.role(r, c), qr::ModuleRole::Alignment);
      const int ring = std::max(std::abs(r - 30), std::abs(c - 30));
      const double expect = ring == 1 ? 255.0 : 0.0;
      for (int y = 0; y < a; ++y) {
        for (int x = 0; x < a; ++x) ASSERT_EQ(bp.image.at(c * a + x, r * a + y), expect);
      }
    }
  }
}

TEST(Markers, Idempotent) {
  for (MarkerStyle style : {MarkerStyle::Square, MarkerStyle::CrossCenterOnly}) {
    const Blueprint once = affix_markers(noise_blueprint(8), style);
    const Blueprint twice = affix_markers(once, style);
    EXPECT_EQ(once.image, twice.image);
    EXPECT_EQ(once.u_map, twice.u_map);
  }
}

TEST(Markers, CrossCentreMask) {
  const auto modules = cross_center_modules(5);
  const int n = 37;
  auto at = [&](int r, int c) { return modules[static_cast<std::size_t>(r) * n + c] != 0; };
  EXPECT_TRUE(at(3, 3));
  EXPECT_TRUE(at(3, 7));
  EXPECT_TRUE(at(0, 2));
  EXPECT_FALSE(at(0, 0));
  EXPECT_FALSE(at(3, 8));
  EXPECT_TRUE(at(30, 28));
  EXPECT_FALSE(at(29, 29));
  const CrossCenterMask m = cross_center_mask(ModuleGrid{n, 4, 2, 2}, 5, n * 4 + 4, n * 4 + 4);
  EXPECT_EQ(m.count(), static_cast<std::size_t>(std::count(modules.begin(), modules.end(), 1)) * 16);
  EXPECT_FALSE(m.at(0, 0));
  EXPECT_TRUE(m.at(2 + 3 * 4, 2 + 3 * 4));
  EXPECT_EQ(parse_marker_style(to_string(MarkerStyle::CrossCenterOnly)), MarkerStyle::CrossCenterOnly);
  EXPECT_THROW(parse_marker_style("round"), Error);
}

TEST(Blueprint, GuaranteeOnTexturesAndDecode) {
  const qr::Message msg = qr::Message::from_text("https://example.com/aesthetic-qr");
  const int a = 16;
  const DecodeParams p = DecodeParams::defaults_for(a);
  for (const auto& [name, img] : testing::procedural_textures(200)) {
    const Blueprint bp = make_blueprint(img, msg, p);
    EXPECT_EQ(bp.image.width(), 592);
    EXPECT_EQ(decode::error_level(bp.image, bp.reorganized, bp.grid, p), 0.0) << name;
    EXPECT_EQ(qr::rs_decode_payload(bp.reorganized), msg);
    int min_u = a;
    for (int u : bp.u_map) min_u = std::min(min_u, u);
    EXPECT_GE(min_u, p.window());
    // any smaller window still sees a constant extreme
    EXPECT_EQ(decode::error_level(bp.image, bp.reorganized, bp.grid, p.with_window(1)), 0.0) << name;
    EXPECT_EQ(decode::standard_decode(bp.image, p), msg) << name;
  }
}

TEST(Blueprint, RejectsBadOptions) {
  const qr::Message msg = qr::Message::from_text("x");
  EXPECT_THROW(make_blueprint(GrayImage(), msg, kParams), Error);
  EXPECT_THROW(make_blueprint(GrayImage(10, 10, 1), msg, DecodeParams(0.6, 9), BlueprintOptions{.module_px = 8}),
               Error);
}

}  // namespace
}  // namespace artqr::qab
