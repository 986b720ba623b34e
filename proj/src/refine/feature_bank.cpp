#include <array>
#include <cmath>

#include "artqr/error.hpp"
#include "artqr/refine/refine.hpp"

namespace artqr::refine {

namespace {

constexpr int C = FeatureBank::kChannels;

struct Plane {
  int w = 0;
  int h = 0;
  std::vector<double> v;

  double at(int x, int y) const { return v[static_cast<std::size_t>(y) * w + x]; }
  double& at(int x, int y) { return v[static_cast<std::size_t>(y) * w + x]; }
};

std::vector<Plane> pyramid(const GrayImage& img, int levels) {
  std::vector<Plane> out;
  Plane base{img.width(), img.height(), {}};
  base.v.reserve(img.size());
  for (double p : img.pixels()) base.v.push_back(p / kMaxGray);
  out.push_back(std::move(base));
  while (static_cast<int>(out.size()) < levels) {
    const Plane& prev = out.back();
    Plane next{prev.w / 2, prev.h / 2, {}};
    if (next.w < 3 || next.h < 3) break;
    next.v.resize(static_cast<std::size_t>(next.w) * next.h);
    for (int y = 0; y < next.h; ++y) {
      for (int x = 0; x < next.w; ++x) {
        next.at(x, y) = 0.25 * (prev.at(2 * x, 2 * y) + prev.at(2 * x + 1, 2 * y) + prev.at(2 * x, 2 * y + 1) +
                                prev.at(2 * x + 1, 2 * y + 1));
      }
    }
    out.push_back(std::move(next));
  }
  return out;
}

struct LocalMoments {
  double mean;
  double std;
};

LocalMoments local_moments(const Plane& p, int x, int y) {
  double m1 = 0;
  double m2 = 0;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      const double v = p.at(x + dx, y + dy);
      m1 += v;
      m2 += v * v;
    }
  }
  m1 /= 9.0;
  m2 /= 9.0;
  return {m1, std::sqrt(std::max(0.0, m2 - m1 * m1) + 1e-6)};
}

// Interior pixels only, so every stencil stays inside the plane.
std::vector<std::array<double, C>> features(const Plane& p) {
  std::vector<std::array<double, C>> f;
  f.reserve(static_cast<std::size_t>(p.w - 2) * (p.h - 2));
  for (int y = 1; y < p.h - 1; ++y) {
    for (int x = 1; x < p.w - 1; ++x) {
      f.push_back({p.at(x, y), 0.5 * (p.at(x + 1, y) - p.at(x - 1, y)), 0.5 * (p.at(x, y + 1) - p.at(x, y - 1)),
                   local_moments(p, x, y).std});
    }
  }
  return f;
}

GaussianStats stats_of(const std::vector<std::array<double, C>>& f) {
  GaussianStats s;
  s.mean = Eigen::VectorXd::Zero(C);
  s.cov = Eigen::MatrixXd::Zero(C, C);
  const auto n = static_cast<double>(f.size());
  for (const auto& row : f) {
    for (int i = 0; i < C; ++i) s.mean(i) += row[static_cast<std::size_t>(i)];
  }
  s.mean /= n;
  for (const auto& row : f) {
    Eigen::Matrix<double, C, 1> d;
    for (int i = 0; i < C; ++i) d(i) = row[static_cast<std::size_t>(i)] - s.mean(i);
    s.cov += d * d.transpose();
  }
  s.cov /= n;
  s.cov += FeatureBank::kCovarianceRidge * Eigen::MatrixXd::Identity(C, C);
  return s;
}

void require_levels(const FeatureBank& bank) {
  if (bank.levels < 1) throw Error(ErrorCode::InvalidArgument, "feature bank needs at least one level");
}

}  // namespace

FeatureStats feature_stats(const GrayImage& img, const FeatureBank& bank) {
  require_levels(bank);
  if (img.width() < 3 || img.height() < 3) throw Error(ErrorCode::InvalidArgument, "feature bank: image < 3x3");
  FeatureStats out;
  for (const Plane& p : pyramid(img, bank.levels)) out.scales.push_back(stats_of(features(p)));
  return out;
}

HarmonizingLoss::HarmonizingLoss(const GrayImage& reference, const FeatureBank& bank)
    : width_(reference.width()), height_(reference.height()), bank_(bank), reference_(feature_stats(reference, bank)) {}

LossValue HarmonizingLoss::operator()(const GrayImage& img) const {
  if (img.width() != width_ || img.height() != height_) {
    throw Error(ErrorCode::DimensionMismatch, "harmonizing_loss: image and reference sizes differ");
  }
  const std::vector<Plane> pyr = pyramid(img, bank_.levels);
  std::vector<Plane> grads;
  for (const Plane& p : pyr) grads.push_back({p.w, p.h, std::vector<double>(p.v.size(), 0.0)});

  LossValue out;
  for (std::size_t level = 0; level < pyr.size(); ++level) {
    const Plane& p = pyr[level];
    Plane& gp = grads[level];
    const auto f = features(p);
    const GaussianStats s = stats_of(f);
    const GaussianStats& ref = reference_.scales[level];
    const double value = gaussian_w2(s, ref);
    out.value += value;
    if (value == 0.0) continue;
    const W2Gradient w = gaussian_w2_gradient(s, ref);

    const auto n = static_cast<double>(f.size());
    const Eigen::Matrix<double, C, 1> gm = w.d_mean / n;
    const Eigen::Matrix<double, C, C> gc = (2.0 / n) * w.d_cov;
    std::size_t k = 0;
    for (int y = 1; y < p.h - 1; ++y) {
      for (int x = 1; x < p.w - 1; ++x, ++k) {
        Eigen::Matrix<double, C, 1> d;
        for (int i = 0; i < C; ++i) d(i) = f[k][static_cast<std::size_t>(i)] - s.mean(i);
        const Eigen::Matrix<double, C, 1> gf = gm + gc * d;
        gp.at(x, y) += gf(0);
        gp.at(x + 1, y) += 0.5 * gf(1);
        gp.at(x - 1, y) -= 0.5 * gf(1);
        gp.at(x, y + 1) += 0.5 * gf(2);
        gp.at(x, y - 1) -= 0.5 * gf(2);
        const LocalMoments lm = local_moments(p, x, y);
        const double scale = gf(3) / (9.0 * lm.std);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) gp.at(x + dx, y + dy) += scale * (p.at(x + dx, y + dy) - lm.mean);
        }
      }
    }
  }

  for (std::size_t level = grads.size() - 1; level > 0; --level) {
    const Plane& g = grads[level];
    Plane& below = grads[level - 1];
    for (int y = 0; y < g.h; ++y) {
      for (int x = 0; x < g.w; ++x) {
        const double q = 0.25 * g.at(x, y);
        below.at(2 * x, 2 * y) += q;
        below.at(2 * x + 1, 2 * y) += q;
        below.at(2 * x, 2 * y + 1) += q;
        below.at(2 * x + 1, 2 * y + 1) += q;
      }
    }
  }
  out.grad = std::move(grads.front().v);
  for (double& v : out.grad) v /= kMaxGray;
  return out;
}

LossValue harmonizing_loss(const GrayImage& img, const GrayImage& reference, const FeatureBank& bank) {
  if (img.width() != reference.width() || img.height() != reference.height()) {
    throw Error(ErrorCode::DimensionMismatch, "harmonizing_loss: image and reference sizes differ");
  }
  return HarmonizingLoss(reference, bank)(img);
}

}  // namespace artqr::refine
