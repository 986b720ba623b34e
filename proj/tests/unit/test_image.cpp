#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "artqr/error.hpp"
#include "artqr/image.hpp"
#include "artqr/png_io.hpp"
#include "test_support.hpp"

namespace artqr {
namespace {

RgbImage single(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  RgbImage img(1, 1);
  img.data = {r, g, b};
  return img;
}

TEST(Luminance, AchromaticPixelsKeepTheirLevel) {
  for (int g = 0; g < 256; ++g) {
    const auto v = static_cast<std::uint8_t>(g);
    EXPECT_EQ(to_luminance(single(v, v, v)).at(0, 0), g);
  }
}

TEST(Luminance, PureRedIs76) {
  // 0.299 * 255 = 76.245
  EXPECT_EQ(to_luminance(single(255, 0, 0)).at(0, 0), 76);
  EXPECT_EQ(to_luminance(single(255, 255, 255)).at(0, 0), 255);
}

TEST(Luminance, MatchesRoundedWeightedSum) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> b(0, 255);
  for (int i = 0; i < 2000; ++i) {
    const int r = b(rng), g = b(rng), bl = b(rng);
    const double y = 0.299 * r + 0.587 * g + 0.114 * bl;
    const double got = to_luminance(single(static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                                            static_cast<std::uint8_t>(bl)))
                           .at(0, 0);
    EXPECT_LE(std::abs(got - y), 0.5 + 1e-9);
  }
}

TEST(GrayImage, ValuesAreClamped) {
  GrayImage img(2, 1, std::vector<double>{-10.0, 300.0});
  EXPECT_EQ(img.at(0, 0), 0.0);
  EXPECT_EQ(img.at(1, 0), 255.0);
  img.set(0, 0, 512);
  EXPECT_EQ(img.at(0, 0), 255.0);
}

TEST(GrayImage, QuantizeRoundsHalfUp) {
  GrayImage img(3, 1, std::vector<double>{1.5, 2.49, 254.5});
  const GrayImage q = img.quantized();
  EXPECT_EQ(q.at(0, 0), 2);
  EXPECT_EQ(q.at(1, 0), 2);
  EXPECT_EQ(q.at(2, 0), 255);
}

TEST(Chroma, GrayRecombinesToGray) {
  GrayImage y(4, 1, std::vector<double>{0, 17, 128, 255});
  const RgbImage rgb = gray_to_rgb(y);
  const RgbImage back = recombine(y, extract_chroma(rgb));
  EXPECT_EQ(back, rgb);
}

TEST(Chroma, ColorSurvivesRoundTripWithinOneLevel) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> b(30, 220);
  RgbImage rgb(16, 16);
  for (auto& v : rgb.data) v = static_cast<std::uint8_t>(b(rng));
  const RgbImage back = recombine(to_luminance(rgb), extract_chroma(rgb));
  for (std::size_t i = 0; i < rgb.data.size(); ++i) EXPECT_LE(std::abs(int(rgb.data[i]) - int(back.data[i])), 2);
}

TEST(ResizeArea, PreservesMeanOnIntegerFactor) {
  std::mt19937_64 rng(1);
  const GrayImage img = testing::uniform_noise_image(64, 48, rng);
  const GrayImage half = resize_area(img, 32, 24);
  const double m1 = std::accumulate(img.pixels().begin(), img.pixels().end(), 0.0) / img.size();
  const double m2 = std::accumulate(half.pixels().begin(), half.pixels().end(), 0.0) / half.size();
  EXPECT_NEAR(m1, m2, 1e-9);
  EXPECT_NEAR(half.at(0, 0), (img.at(0, 0) + img.at(1, 0) + img.at(0, 1) + img.at(1, 1)) / 4, 1e-9);
}

TEST(ResizeArea, ConstantStaysConstantOnOddFactor) {
  const GrayImage img(37, 37, 77.0);
  const GrayImage out = resize_area(img, 113, 113);
  for (double v : out.pixels()) EXPECT_NEAR(v, 77.0, 1e-9);
}

TEST(Png, GrayRoundTrip) {
  const auto dir = testing::scratch_dir("png");
  std::mt19937_64 rng(3);
  const GrayImage img = testing::uniform_noise_image(31, 17, rng).quantized();
  write_png(dir / "g.png", img);
  const PngImage back = read_png(dir / "g.png");
  EXPECT_FALSE(back.is_color());
  EXPECT_EQ(back.to_gray(), img);
  std::filesystem::remove_all(dir);
}

TEST(Png, RgbRoundTripAndLuminance) {
  const auto dir = testing::scratch_dir("png");
  RgbImage rgb(3, 2);
  rgb.data = {255, 0, 0, 0, 255, 0, 0, 0, 255, 10, 20, 30, 200, 100, 50, 255, 255, 255};
  write_png(dir / "c.png", rgb);
  const PngImage back = read_png(dir / "c.png");
  ASSERT_TRUE(back.is_color());
  EXPECT_EQ(back.to_rgb(), rgb);
  EXPECT_EQ(back.to_gray().at(0, 0), 76);
  std::filesystem::remove_all(dir);
}

TEST(Png, MissingFileIsIoError) {
  try {
    read_png("/nonexistent/dir/none.png");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
}

TEST(Png, GarbageIsIoError) {
  const auto dir = testing::scratch_dir("png");
  std::ofstream(dir / "bad.png") << "not a png";
  EXPECT_THROW(read_png(dir / "bad.png"), Error);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace artqr
