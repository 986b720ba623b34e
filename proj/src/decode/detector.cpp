#include "artqr/decode/detector.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "artqr/error.hpp"

namespace artqr::decode {

std::array<double, 2> Homography::apply(double x, double y) const {
  const double w = m[6] * x + m[7] * y + m[8];
  return {(m[0] * x + m[1] * y + m[2]) / w, (m[3] * x + m[4] * y + m[5]) / w};
}

Homography Homography::inverse() const {
  Eigen::Matrix3d a;
  a << m[0], m[1], m[2], m[3], m[4], m[5], m[6], m[7], m[8];
  const Eigen::Matrix3d inv = a.inverse();
  Homography h;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) h.m[static_cast<std::size_t>(r * 3 + c)] = inv(r, c);
  }
  return h;
}

Homography Homography::operator*(const Homography& rhs) const {
  Homography h;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += m[static_cast<std::size_t>(r * 3 + k)] * rhs.m[static_cast<std::size_t>(k * 3 + c)];
      h.m[static_cast<std::size_t>(r * 3 + c)] = s;
    }
  }
  return h;
}

Homography Homography::from_points(const std::array<std::array<double, 2>, 4>& src,
                                   const std::array<std::array<double, 2>, 4>& dst) {
  Eigen::Matrix<double, 8, 8> a;
  Eigen::Matrix<double, 8, 1> b;
  for (int i = 0; i < 4; ++i) {
    const double x = src[i][0], y = src[i][1], u = dst[i][0], v = dst[i][1];
    a.row(2 * i) << x, y, 1, 0, 0, 0, -u * x, -u * y;
    a.row(2 * i + 1) << 0, 0, 0, x, y, 1, -v * x, -v * y;
    b(2 * i) = u;
    b(2 * i + 1) = v;
  }
  const Eigen::Matrix<double, 8, 1> sol = a.fullPivLu().solve(b);
  Homography h;
  for (int i = 0; i < 8; ++i) h.m[static_cast<std::size_t>(i)] = sol(i);
  h.m[8] = 1.0;
  return h;
}

namespace {

class BinaryImage {
 public:
  BinaryImage(const GrayImage& img, double threshold) : w_(img.width()), h_(img.height()), dark_(img.size()) {
    const auto px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) dark_[i] = px[i] < threshold ? 1 : 0;
  }
  int width() const { return w_; }
  int height() const { return h_; }
  // Outside the image is light.
  bool dark(int x, int y) const {
    return x >= 0 && y >= 0 && x < w_ && y < h_ && dark_[static_cast<std::size_t>(y) * w_ + x] != 0;
  }
  bool inside(int x, int y) const { return x >= 0 && y >= 0 && x < w_ && y < h_; }

 private:
  int w_;
  int h_;
  std::vector<std::uint8_t> dark_;
};

bool finder_ratio(const std::array<int, 5>& c, double variance_scale = 0.5) {
  int total = 0;
  for (int v : c) {
    if (v == 0) return false;
    total += v;
  }
  if (total < 7) return false;
  const double module = total / 7.0;
  const double max_var = module * variance_scale;
  return std::abs(module - c[0]) < max_var && std::abs(module - c[1]) < max_var &&
         std::abs(3.0 * module - c[2]) < 3 * max_var && std::abs(module - c[3]) < max_var &&
         std::abs(module - c[4]) < max_var;
}

// Runs along a line through (cx, cy) with step (dx, dy): returns counts for the
// 1:1:3:1:1 pattern and the centre offset (in steps, relative to start) of the
// central run, or nullopt.
struct LineCheck {
  std::array<int, 5> counts{};
  double center_offset = 0;  // edge coordinate offset of the centre along the line
  int total() const { return counts[0] + counts[1] + counts[2] + counts[3] + counts[4]; }
};

std::optional<LineCheck> cross_check(const BinaryImage& bin, int cx, int cy, int dx, int dy, int max_count) {
  if (!bin.dark(cx, cy)) return std::nullopt;
  LineCheck lc;
  auto& c = lc.counts;
  // Backwards.
  int i = 0;
  while (bin.dark(cx - i * dx, cy - i * dy)) {
    ++c[2];
    ++i;
    if (c[2] > max_count) return std::nullopt;
  }
  const int back_center = i;  // dark pixels at offsets -(back_center-1) .. 0
  while (!bin.dark(cx - i * dx, cy - i * dy)) {
    ++c[1];
    ++i;
    if (c[1] > max_count) return std::nullopt;
  }
  while (bin.dark(cx - i * dx, cy - i * dy)) {
    ++c[0];
    ++i;
    if (c[0] > max_count) return std::nullopt;
  }
  // Forwards.
  int j = 1;
  while (bin.dark(cx + j * dx, cy + j * dy)) {
    ++c[2];
    ++j;
    if (c[2] > 3 * max_count) return std::nullopt;
  }
  const int fwd_center = j;  // dark pixels at offsets 1 .. fwd_center-1
  while (!bin.dark(cx + j * dx, cy + j * dy)) {
    ++c[3];
    ++j;
    if (c[3] > max_count) return std::nullopt;
  }
  while (bin.dark(cx + j * dx, cy + j * dy)) {
    ++c[4];
    ++j;
    if (c[4] > max_count) return std::nullopt;
  }
  // Central run covers pixel offsets [-(back_center-1), fwd_center-1]; its centre
  // in edge coordinates relative to the start pixel's leading edge:
  lc.center_offset = (-(back_center - 1) + fwd_center) / 2.0;
  return lc;
}

struct Candidates {
  std::vector<FinderCandidate> list;

  void add(double x, double y, double ms) {
    for (FinderCandidate& c : list) {
      if (std::abs(c.x - x) <= c.module_size && std::abs(c.y - y) <= c.module_size &&
          std::abs(c.module_size - ms) <= std::max(1.0, c.module_size * 0.5)) {
        const double k = c.count;
        c.x = (c.x * k + x) / (k + 1);
        c.y = (c.y * k + y) / (k + 1);
        c.module_size = (c.module_size * k + ms) / (k + 1);
        ++c.count;
        return;
      }
    }
    list.push_back({x, y, ms, 1});
  }
};

// Confirms a horizontal hit at edge-coordinate centre (x, row y).
void confirm_finder(const BinaryImage& bin, double x, int row, int h_total, Candidates& out) {
  const int cx = static_cast<int>(std::floor(x));
  const auto vert = cross_check(bin, cx, row, 0, 1, h_total);
  if (!vert || !finder_ratio(vert->counts)) return;
  const int v_total = vert->total();
  if (5 * std::abs(v_total - h_total) >= 3 * h_total) return;
  const double cy = row + vert->center_offset;
  const int cy_px = static_cast<int>(std::floor(cy));
  const auto horiz = cross_check(bin, cx, cy_px, 1, 0, h_total);
  if (!horiz || !finder_ratio(horiz->counts)) return;
  const double cx2 = cx + horiz->center_offset;
  const auto diag = cross_check(bin, static_cast<int>(std::floor(cx2)), cy_px, 1, 1, h_total);
  if (!diag || !finder_ratio(diag->counts, 0.75)) return;
  const double ms = (horiz->total() + v_total) / 14.0;
  out.add(cx2, cy, ms);
}

// Distance (pixels) from (x, y) along (ux, uy) through dark -> light -> dark until light again.
double run_to_outer_edge(const BinaryImage& bin, double x, double y, double ux, double uy, double limit) {
  int state = 0;
  const double step = 0.5;
  for (double t = 0; t <= limit; t += step) {
    const bool d = bin.dark(static_cast<int>(std::floor(x + ux * t)), static_cast<int>(std::floor(y + uy * t)));
    if (state == 0 && !d) state = 1;
    else if (state == 1 && d) state = 2;
    else if (state == 2 && !d) return t;
  }
  return -1;
}

double module_size_along(const BinaryImage& bin, const FinderCandidate& from, const FinderCandidate& to) {
  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  const double len = std::hypot(dx, dy);
  if (len <= 0) return -1;
  const double ux = dx / len;
  const double uy = dy / len;
  const double limit = 8.0 * from.module_size;
  const double a = run_to_outer_edge(bin, from.x, from.y, ux, uy, limit);
  const double b = run_to_outer_edge(bin, from.x, from.y, -ux, -uy, limit);
  if (a < 0 && b < 0) return from.module_size;
  if (a < 0) return b / 3.5;
  if (b < 0) return a / 3.5;
  return (a + b) / 7.0;
}

double estimate_module(const BinaryImage& bin, const FinderCandidate& p, const FinderCandidate& q) {
  const double a = module_size_along(bin, p, q);
  const double b = module_size_along(bin, q, p);
  if (a <= 0) return b;
  if (b <= 0) return a;
  return (a + b) / 2.0;
}

// Length of the run of one colour from (x, y) along (dx, dy); stops at the border.
int run_length(const BinaryImage& bin, int x, int y, int dx, int dy, bool dark, int limit) {
  int n = 0;
  while (n <= limit && bin.inside(x + n * dx, y + n * dy) && bin.dark(x + n * dx, y + n * dy) == dark) ++n;
  return n;
}

// Dark-light-dark-light-dark profile of an alignment pattern through (x, y)
// along (dx, dy). Returns the centre of the middle run, relative to the
// leading edge of pixel (x, y).
std::optional<double> alignment_profile(const BinaryImage& bin, int x, int y, int dx, int dy, double ms) {
  if (!bin.dark(x, y)) return std::nullopt;
  const int limit = static_cast<int>(std::ceil(2 * ms));
  auto ok = [ms](int v) { return std::abs(v - ms) < ms * 0.5 + 0.5; };
  const int back = run_length(bin, x, y, -dx, -dy, true, limit);
  const int fwd = run_length(bin, x + dx, y + dy, dx, dy, true, limit);
  if (!ok(back + fwd)) return std::nullopt;
  const int lb = run_length(bin, x - back * dx, y - back * dy, -dx, -dy, false, limit);
  const int lf = run_length(bin, x + (fwd + 1) * dx, y + (fwd + 1) * dy, dx, dy, false, limit);
  if (!ok(lb) || !ok(lf)) return std::nullopt;
  const int outer = std::max(1, static_cast<int>(0.4 * ms));
  const int db = run_length(bin, x - (back + lb) * dx, y - (back + lb) * dy, -dx, -dy, true, outer);
  const int df = run_length(bin, x + (fwd + 1 + lf) * dx, y + (fwd + 1 + lf) * dy, dx, dy, true, outer);
  if (db < outer || df < outer) return std::nullopt;
  return (-(back - 1) + fwd + 1) / 2.0;
}

// Confirmed alignment pattern centres within 16 modules of the estimate, nearest first.
std::vector<std::array<double, 2>> alignment_candidates(const BinaryImage& bin, double ex, double ey, double ms) {
  const int r = static_cast<int>(std::ceil(16 * ms));
  const int x0 = std::max(0, static_cast<int>(ex) - r);
  const int x1 = std::min(bin.width() - 1, static_cast<int>(ex) + r);
  const int y0 = std::max(0, static_cast<int>(ey) - r);
  const int y1 = std::min(bin.height() - 1, static_cast<int>(ey) + r);
  struct Hit {
    double x, y;
    int count;
  };
  std::vector<Hit> hits;
  for (int y = y0; y <= y1; ++y) {
    int x = x0;
    while (x <= x1) {
      const bool d = bin.dark(x, y);
      int len = 0;
      while (x + len <= x1 && bin.dark(x + len, y) == d) ++len;
      if (d && std::abs(len - ms) < ms * 0.5 + 0.5) {
        const int cx = x + len / 2;
        if (const auto h = alignment_profile(bin, cx, y, 1, 0, ms)) {
          const double fx = cx + *h;
          const int col = static_cast<int>(std::floor(fx));
          if (const auto v = alignment_profile(bin, col, y, 0, 1, ms)) {
            const double fy = y + *v;
            if (const auto h2 = alignment_profile(bin, col, static_cast<int>(std::floor(fy)), 1, 0, ms)) {
              const double gx = col + *h2;
              auto it = std::find_if(hits.begin(), hits.end(), [&](const Hit& o) {
                return std::abs(o.x - gx) <= ms / 2 && std::abs(o.y - fy) <= ms / 2;
              });
              if (it == hits.end()) {
                hits.push_back({gx, fy, 1});
              } else {
                it->x = (it->x * it->count + gx) / (it->count + 1);
                it->y = (it->y * it->count + fy) / (it->count + 1);
                ++it->count;
              }
            }
          }
        }
      }
      x += len;
    }
  }
  std::sort(hits.begin(), hits.end(), [&](const Hit& a, const Hit& b) {
    return std::hypot(a.x - ex, a.y - ey) < std::hypot(b.x - ex, b.y - ey);
  });
  std::vector<std::array<double, 2>> out;
  for (const Hit& h : hits) out.push_back({h.x, h.y});
  if (out.size() > 6) out.resize(6);
  return out;
}

double bilinear(const GrayImage& img, double x, double y) {
  // (x, y) in edge coordinates; pixel centres sit at +0.5. Outside is white.
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

qr::CodeTarget sample_grid(const GrayImage& img, const Homography& h, int dim, double ms, double threshold) {
  const int version = qr::version_for_side(dim);
  const qr::Layout& lay = qr::layout_for(version);
  qr::CodeTarget t;
  t.n = dim;
  t.version = version;
  t.roles = lay.roles;
  t.bits.resize(static_cast<std::size_t>(dim) * dim);
  const int k = std::clamp(static_cast<int>(std::lround(ms / 3.0)), 1, 5);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      double sum = 0;
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
          const double mx = c + 0.5 + ((j + 0.5) / k - 0.5) / 3.0;
          const double my = r + 0.5 + ((i + 0.5) / k - 0.5) / 3.0;
          const auto p = h.apply(mx, my);
          sum += bilinear(img, p[0], p[1]);
        }
      }
      t.bits[static_cast<std::size_t>(r) * dim + c] = sum / (k * k) < threshold ? 0 : 1;
    }
  }
  return t;
}

std::optional<ModuleGrid> axis_aligned_grid(const Homography& h, int dim, const GrayImage& img) {
  const auto o = h.apply(0, 0);
  const auto e = h.apply(dim, 0);
  const double a_est = (e[0] - o[0]) / dim;
  const int a = static_cast<int>(std::lround(a_est));
  if (a < 1) return std::nullopt;
  const int ox = static_cast<int>(std::lround(o[0]));
  const int oy = static_cast<int>(std::lround(o[1]));
  const double tol = 0.75;
  for (const auto& corner : {std::array<int, 2>{0, 0}, {dim, 0}, {0, dim}, {dim, dim}}) {
    const auto p = h.apply(corner[0], corner[1]);
    if (std::abs(p[0] - (ox + a * corner[0])) > tol || std::abs(p[1] - (oy + a * corner[1])) > tol) {
      return std::nullopt;
    }
  }
  ModuleGrid g{dim, a, ox, oy};
  if (!g.fits(img)) return std::nullopt;
  return g;
}

struct Triple {
  FinderCandidate tl, tr, bl;
  double penalty = 0;
};

std::vector<Triple> plausible_triples(std::vector<FinderCandidate> cands) {
  std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) { return a.count > b.count; });
  // Prefer repeatedly confirmed candidates when enough of them exist.
  std::vector<FinderCandidate> strong;
  for (const auto& c : cands) {
    if (c.count >= 2) strong.push_back(c);
  }
  if (strong.size() >= 3) cands = std::move(strong);
  if (cands.size() > 12) cands.resize(12);

  std::vector<Triple> out;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    for (std::size_t j = i + 1; j < cands.size(); ++j) {
      for (std::size_t k = j + 1; k < cands.size(); ++k) {
        std::array<FinderCandidate, 3> p{cands[i], cands[j], cands[k]};
        const double m_lo = std::min({p[0].module_size, p[1].module_size, p[2].module_size});
        const double m_hi = std::max({p[0].module_size, p[1].module_size, p[2].module_size});
        if (m_hi > 1.6 * m_lo) continue;
        auto d = [](const FinderCandidate& a, const FinderCandidate& b) { return std::hypot(a.x - b.x, a.y - b.y); };
        const double d01 = d(p[0], p[1]), d02 = d(p[0], p[2]), d12 = d(p[1], p[2]);
        int corner = 0;  // vertex opposite the longest side
        if (d01 >= d02 && d01 >= d12) corner = 2;
        else if (d02 >= d01 && d02 >= d12) corner = 1;
        const FinderCandidate& a = p[corner];
        const FinderCandidate& b = p[(corner + 1) % 3];
        const FinderCandidate& c = p[(corner + 2) % 3];
        const double l1 = d(a, b), l2 = d(a, c);
        const double ms = (m_lo + m_hi) / 2;
        if (l1 < 10 * ms || l2 < 10 * ms) continue;
        const double ratio = l1 / l2;
        if (ratio < 0.5 || ratio > 2.0) continue;
        const double cosang = ((b.x - a.x) * (c.x - a.x) + (b.y - a.y) * (c.y - a.y)) / (l1 * l2);
        if (std::abs(cosang) > 0.4) continue;
        Triple t;
        t.tl = a;
        const double cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
        t.tr = cross > 0 ? b : c;
        t.bl = cross > 0 ? c : b;
        t.penalty = std::abs(cosang) + std::abs(std::log(ratio)) + std::log(m_hi / m_lo) -
                    0.02 * std::log(static_cast<double>(p[0].count + p[1].count + p[2].count));
        out.push_back(t);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Triple& x, const Triple& y) { return x.penalty < y.penalty; });
  if (out.size() > 10) out.resize(10);
  return out;
}

std::vector<int> candidate_dimensions(double estimate) {
  const int base = static_cast<int>(std::lround(estimate));
  std::vector<int> dims;
  for (int delta : {0, -1, 1, -2, 2, -3, 3, -4, 4, -5, 5}) {
    const int d = base + delta;
    if (d >= 21 && d <= 177 && (d - 17) % 4 == 0 &&
        std::find(dims.begin(), dims.end(), d) == dims.end()) {
      dims.push_back(d);
    }
  }
  return dims;
}

}  // namespace

std::vector<FinderCandidate> find_finder_candidates(const GrayImage& img, double threshold) {
  const BinaryImage bin(img, threshold);
  Candidates cands;
  std::vector<int> run_start;
  std::vector<int> run_len;
  std::vector<std::uint8_t> run_dark;
  for (int y = 0; y < bin.height(); ++y) {
    run_start.clear();
    run_len.clear();
    run_dark.clear();
    // Implicit light run before the row.
    run_start.push_back(-1);
    run_len.push_back(1);
    run_dark.push_back(0);
    for (int x = 0; x < bin.width(); ++x) {
      const std::uint8_t d = bin.dark(x, y) ? 1 : 0;
      if (d == run_dark.back()) {
        ++run_len.back();
      } else {
        run_start.push_back(x);
        run_len.push_back(1);
        run_dark.push_back(d);
      }
    }
    if (run_dark.back()) {
      run_start.push_back(bin.width());
      run_len.push_back(1);
      run_dark.push_back(0);
    }
    for (std::size_t i = 1; i + 5 < run_len.size() + 1 && i + 4 < run_len.size(); ++i) {
      if (!run_dark[i]) continue;
      const std::array<int, 5> counts{run_len[i], run_len[i + 1], run_len[i + 2], run_len[i + 3], run_len[i + 4]};
      if (!finder_ratio(counts)) continue;
      const int total = counts[0] + counts[1] + counts[2] + counts[3] + counts[4];
      const double cx = run_start[i + 2] + counts[2] / 2.0;
      confirm_finder(bin, cx, y, total, cands);
    }
  }
  return cands.list;
}

DecodeReport standard_decode_report(const GrayImage& img, const DecodeParams& params) {
  if (img.empty()) throw Error(ErrorCode::NotFound, "empty image");
  const double threshold = (params.tb() + params.tw()) / 2.0;
  const auto cands = find_finder_candidates(img, threshold);
  const auto triples = plausible_triples(cands);
  if (triples.empty()) throw Error(ErrorCode::NotFound, "no finder pattern triad located");

  const BinaryImage bin(img, threshold);
  std::optional<Error> last_error;
  for (const Triple& t : triples) {
    const double ms_tr = estimate_module(bin, t.tl, t.tr);
    const double ms_bl = estimate_module(bin, t.tl, t.bl);
    if (ms_tr <= 0 || ms_bl <= 0) continue;
    const double d_tr = std::hypot(t.tr.x - t.tl.x, t.tr.y - t.tl.y) / ms_tr;
    const double d_bl = std::hypot(t.bl.x - t.tl.x, t.bl.y - t.tl.y) / ms_bl;
    const double ms = (ms_tr + ms_bl) / 2.0;
    for (int dim : candidate_dimensions((d_tr + d_bl) / 2.0 + 7.0)) {
      const int version = qr::version_for_side(dim);
      std::vector<Homography> maps;
      const std::array<double, 2> br_affine{t.tr.x - t.tl.x + t.bl.x, t.tr.y - t.tl.y + t.bl.y};
      const Homography affine = Homography::from_points(
          {{{3.5, 3.5}, {dim - 3.5, 3.5}, {3.5, dim - 3.5}, {dim - 3.5, dim - 3.5}}},
          {{{t.tl.x, t.tl.y}, {t.tr.x, t.tr.y}, {t.bl.x, t.bl.y}, br_affine}});
      if (version >= 2) {
        const double correction = 1.0 - 3.0 / (dim - 7.0);
        const double ex = t.tl.x + correction * (br_affine[0] - t.tl.x);
        const double ey = t.tl.y + correction * (br_affine[1] - t.tl.y);
        for (const auto& ap : alignment_candidates(bin, ex, ey, ms)) {
          maps.push_back(Homography::from_points(
              {{{3.5, 3.5}, {dim - 3.5, 3.5}, {3.5, dim - 3.5}, {dim - 6.5, dim - 6.5}}},
              {{{t.tl.x, t.tl.y}, {t.tr.x, t.tr.y}, {t.bl.x, t.bl.y}, ap}}));
        }
      }
      maps.push_back(affine);
      for (const Homography& h : maps) {
        try {
          const qr::CodeTarget sampled = sample_grid(img, h, dim, ms, threshold);
          const qr::DecodedPayload payload = qr::decode_payload(sampled);
          DecodeReport report;
          report.message = payload.message;
          report.corrected_errors = payload.corrected_errors;
          report.corrected =
              qr::layout_codewords(version, payload.message.ec_level, payload.mask, payload.codewords);
          report.module_to_image = h;
          report.grid = axis_aligned_grid(h, dim, img);
          return report;
        } catch (const Error& e) {
          last_error = e;
        }
      }
    }
  }
  if (last_error) throw *last_error;
  throw Error(ErrorCode::NotFound, "finder triad did not yield a module grid");
}

qr::Message standard_decode(const GrayImage& img, const DecodeParams& params) {
  return standard_decode_report(img, params).message;
}

}  // namespace artqr::decode
