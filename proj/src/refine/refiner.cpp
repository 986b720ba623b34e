#include <algorithm>
#include <cmath>
#include <deque>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "artqr/error.hpp"
#include "artqr/refine/refine.hpp"

namespace artqr::refine {

void RefineConfig::validate() const {
  if (iterations < 1) throw Error(ErrorCode::InvalidArgument, "refine: iterations must be >= 1");
  if (!(learning_rate > 0)) throw Error(ErrorCode::InvalidArgument, "refine: learning rate must be > 0");
  if (!(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1 && epsilon > 0)) {
    throw Error(ErrorCode::InvalidArgument, "refine: invalid Adam constants");
  }
  if (trace_every < 1 || patience < 1) throw Error(ErrorCode::InvalidArgument, "refine: trace/patience < 1");
}

GrayImage composite_markers(const GrayImage& stylized, const qab::Blueprint& bp) {
  if (stylized.width() != bp.image.width() || stylized.height() != bp.image.height()) {
    throw Error(ErrorCode::DimensionMismatch, "stylized image and blueprint sizes differ");
  }
  const qr::CodeTarget& t = bp.reorganized;
  const auto cross = qab::cross_center_modules(t.version);
  GrayImage out = stylized;
  const auto& g = bp.grid;
  for (int r = 0; r < t.n; ++r) {
    for (int c = 0; c < t.n; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * t.n + c;
      const bool marker =
          bp.marker_style == qab::MarkerStyle::Square ? qr::is_marker_role(t.roles[i]) : cross[i] != 0;
      if (!marker) continue;
      for (int y = 0; y < g.a; ++y) {
        for (int x = 0; x < g.a; ++x) {
          const int px = g.origin_x + c * g.a + x;
          const int py = g.origin_y + r * g.a + y;
          out.set(px, py, bp.image.at(px, py));
        }
      }
    }
  }
  return out;
}

namespace {

void require_finite(double v, const char* name, int iteration) {
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << name << " loss is " << v << " at iteration " << iteration;
    throw Error(ErrorCode::NonFiniteLoss, msg.str());
  }
}

}  // namespace

RefineResult refine_image(const GrayImage& stylized, const qab::Blueprint& bp, const LossWeights& weights,
                          const RefineConfig& cfg) {
  weights.validate();
  cfg.validate();
  const GrayImage start = composite_markers(stylized, bp);
  const int w = start.width();
  const int h = start.height();
  const HarmonizingLoss harmonizing(stylized, cfg.bank);
  const qab::CrossCenterMask mask = qab::cross_center_mask(bp.grid, bp.reorganized.version, w, h);

  std::vector<double> y(start.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = start.pixels()[i] / kMaxGray;
  std::vector<double> m1(y.size(), 0.0);
  std::vector<double> m2(y.size(), 0.0);

  RefineResult res;
  double best_e = 2.0;
  double best_total = 0;
  std::deque<double> recent;
  double b1t = 1.0;
  double b2t = 1.0;

  for (int it = 0;; ++it) {
    GrayImage img(w, h);
    auto px = img.mutable_pixels();
    for (std::size_t i = 0; i < y.size(); ++i) px[i] = y[i] * kMaxGray;
    const GrayImage q = img.quantized();

    const LossValue lm = marker_loss(img, bp, mask);
    const LossValue lc = code_loss(img, bp.reorganized, bp.grid, cfg.params, cfg.code_margin);
    const LossValue lh = harmonizing(img);
    require_finite(lm.value, "marker", it);
    require_finite(lc.value, "code", it);
    require_finite(lh.value, "harmonizing", it);
    const double total = weights.lambda1 * lm.value + weights.lambda2 * lc.value + weights.lambda3 * lh.value;
    require_finite(total, "total", it);
    const double e = decode::error_level(q, bp.reorganized, bp.grid, cfg.params);

    if (e < best_e || (e == best_e && total < best_total)) {
      best_e = e;
      best_total = total;
      res.image = q;
      res.best_iteration = it;
    }

    recent.push_back(total);
    if (static_cast<int>(recent.size()) > cfg.patience + 1) recent.pop_front();
    const bool converged = e == 0.0 && total <= 1e-12;
    bool flat = false;
    if (e == 0.0 && static_cast<int>(recent.size()) == cfg.patience + 1) {
      const auto [lo, hi] = std::minmax_element(recent.begin(), recent.end());
      flat = *hi - *lo < cfg.tolerance;
    }
    const bool last = converged || flat || it == cfg.iterations;

    if (it % cfg.trace_every == 0 || last) {
      res.trace.push_back({it, e, lm.value, lc.value, lh.value, total, best_e, best_total});
    }
    if (last) {
      res.iterations_run = it;
      break;
    }

    b1t *= cfg.beta1;
    b2t *= cfg.beta2;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double g =
          kMaxGray * (weights.lambda1 * lm.grad[i] + weights.lambda2 * lc.grad[i] + weights.lambda3 * lh.grad[i]);
      require_finite(g, "gradient of the total", it);
      m1[i] = cfg.beta1 * m1[i] + (1 - cfg.beta1) * g;
      m2[i] = cfg.beta2 * m2[i] + (1 - cfg.beta2) * g * g;
      const double mh = m1[i] / (1 - b1t);
      const double vh = m2[i] / (1 - b2t);
      y[i] = std::clamp(y[i] - cfg.learning_rate * mh / (std::sqrt(vh) + cfg.epsilon), 0.0, 1.0);
    }
  }
  res.e = best_e;
  return res;
}

RefineColorResult refine_image(const RgbImage& stylized, const qab::Blueprint& bp, const LossWeights& weights,
                               const RefineConfig& cfg) {
  const ChromaPlanes chroma = extract_chroma(stylized);
  RefineColorResult out;
  out.luma = refine_image(to_luminance(stylized), bp, weights, cfg);
  out.image = recombine(out.luma.image, chroma);
  return out;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << "iteration,e,L_m,L_c,L_h,total\n";
  out << std::setprecision(10);
  for (const TraceRow& r : trace) {
    out << r.iteration << ',' << r.e << ',' << r.marker << ',' << r.code << ',' << r.harmonizing << ',' << r.total
        << '\n';
  }
}

}  // namespace artqr::refine
