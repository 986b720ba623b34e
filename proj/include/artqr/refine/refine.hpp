#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <vector>

#include "artqr/decode/sampler.hpp"
#include "artqr/image.hpp"
#include "artqr/qab/qab.hpp"
#include "artqr/qr/qr.hpp"

namespace artqr::refine {

using decode::DecodeParams;
using decode::ModuleGrid;

/// Weights of the marker, code and harmonizing terms.
struct LossWeights {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double lambda3 = 1.0;

  void validate() const;  // throws InvalidArgument on negative weights
};

struct GaussianStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// One Gaussian summary per pyramid level.
struct FeatureStats {
  std::vector<GaussianStats> scales;
};

/// Closed-form 2-Wasserstein distance between two Gaussians.
/// Throws NonSymmetricInput for asymmetric covariances, DimensionMismatch on channel counts.
double gaussian_w2(const GaussianStats& a, const GaussianStats& b);

/// W2(a, b) with its derivatives with respect to a.mean and a.cov.
/// b.cov must be positive definite.
struct W2Gradient {
  double value = 0;
  Eigen::VectorXd d_mean;
  Eigen::MatrixXd d_cov;
};

W2Gradient gaussian_w2_gradient(const GaussianStats& a, const GaussianStats& b);

/// Analytic features on a half-resolution box pyramid of Y / 255:
/// intensity, horizontal and vertical central differences, 3x3 local std.
struct FeatureBank {
  static constexpr int kChannels = 4;
  static constexpr double kCovarianceRidge = 1e-6;
  int levels = 4;
};

FeatureStats feature_stats(const GrayImage& img, const FeatureBank& bank = {});

/// Scalar loss and its gradient with respect to every pixel (gray levels).
struct LossValue {
  double value = 0;
  std::vector<double> grad;
};

/// Modules driven by the code loss: everything except finder and alignment patterns.
inline bool code_loss_module(qr::ModuleRole r) { return !qr::is_marker_role(r); }

inline constexpr double kDefaultCodeMargin = 24.0;

/// Squared hinge on a Gaussian-weighted module sample (sigma = x / 2 over the
/// x x x window): white modules pay for v < T_w + margin, black ones for
/// v > T_b - margin, normalized by L^2.
LossValue code_loss(const GrayImage& img, const qr::CodeTarget& target, const ModuleGrid& grid,
                    const DecodeParams& params, double margin = 0.0);

LossValue marker_loss(const GrayImage& img, const qab::Blueprint& blueprint, const qab::CrossCenterMask& mask);

/// Sum over pyramid levels of W2 between feature statistics of img and reference.
class HarmonizingLoss {
 public:
  HarmonizingLoss(const GrayImage& reference, const FeatureBank& bank = {});

  LossValue operator()(const GrayImage& img) const;

 private:
  int width_;
  int height_;
  FeatureBank bank_;
  FeatureStats reference_;
};

LossValue harmonizing_loss(const GrayImage& img, const GrayImage& reference, const FeatureBank& bank = {});

struct RefineConfig {
  int iterations = 400;
  double learning_rate = 0.002;  // on pixel values scaled to [0, 1]
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  DecodeParams params{0.6, 5};
  double code_margin = kDefaultCodeMargin;
  FeatureBank bank;
  int trace_every = 10;
  int patience = 20;
  double tolerance = 1e-6;

  void validate() const;
};

struct TraceRow {
  int iteration = 0;
  double e = 0;
  double marker = 0;
  double code = 0;
  double harmonizing = 0;
  double total = 0;
  // Best iterate so far, by (e, total).
  double best_e = 0;
  double best_total = 0;
};

struct RefineResult {
  GrayImage image;
  std::vector<TraceRow> trace;
  int best_iteration = 0;
  int iterations_run = 0;
  double e = 0;
};

/// Image the refinement starts from: stylized luminance with the blueprint
/// markers composited in.
GrayImage composite_markers(const GrayImage& stylized, const qab::Blueprint& blueprint);

/// Adam on the luminance of `stylized` against lambda1 L_m + lambda2 L_c + lambda3 L_h.
/// Returns the iterate with the lowest (e, total).
RefineResult refine_image(const GrayImage& stylized, const qab::Blueprint& blueprint, const LossWeights& weights,
                          const RefineConfig& cfg);

struct RefineColorResult {
  RgbImage image;
  RefineResult luma;
};

/// Refines the BT.601 luminance and reattaches the stylized chroma.
RefineColorResult refine_image(const RgbImage& stylized, const qab::Blueprint& blueprint, const LossWeights& weights,
                               const RefineConfig& cfg);

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);

}  // namespace artqr::refine
