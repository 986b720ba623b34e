#include <algorithm>
#include <numeric>

#include "artqr/error.hpp"
#include "artqr/qab/qab.hpp"

namespace artqr::qab {

namespace {

bool is_data(qr::ModuleRole r) { return !qr::is_function_role(r); }

// Change in data-module mismatches if `v` were XORed into `cur`.
int flip_gain(const qr::CodeTarget& cur, const ModuleBits& desired, const qr::BitVector& v) {
  int gain = 0;
  for (std::size_t i = 0; i < cur.bits.size(); ++i) {
    if (!v.get(i) || !is_data(cur.roles[i])) continue;
    gain += cur.bits[i] != desired.bits[i] ? 1 : -1;
  }
  return gain;
}

void xor_into(qr::CodeTarget& cur, const qr::BitVector& v) {
  for (std::size_t i = 0; i < cur.bits.size(); ++i) {
    if (v.get(i)) cur.bits[i] ^= 1;
  }
}

}  // namespace

int data_distance(const qr::CodeTarget& target, const ModuleBits& desired) {
  if (desired.n != target.n) throw Error(ErrorCode::DimensionMismatch, "data_distance: size");
  int d = 0;
  for (std::size_t i = 0; i < target.bits.size(); ++i) {
    if (is_data(target.roles[i]) && target.bits[i] != desired.bits[i]) ++d;
  }
  return d;
}

qr::CodeTarget module_reorganize(const qr::CodeTarget& target, const ModuleBits& desired,
                                 const qr::FreeBitBasis& basis, std::span<const double> priority) {
  if (desired.n != target.n) throw Error(ErrorCode::DimensionMismatch, "module_reorganize: size");
  const std::size_t cells = target.bits.size();
  if (!priority.empty() && priority.size() != cells) {
    throw Error(ErrorCode::DimensionMismatch, "module_reorganize: priority size");
  }

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < cells; ++i) {
    if (is_data(target.roles[i])) order.push_back(i);
  }
  if (!priority.empty()) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return priority[a] > priority[b]; });
  }

  qr::CodeTarget cur = target;
  std::vector<qr::BitVector> pool = basis.vectors;
  std::vector<qr::BitVector> pivots;
  for (std::size_t m : order) {
    if (pool.empty()) break;
    auto it = std::find_if(pool.begin(), pool.end(), [m](const qr::BitVector& v) { return v.get(m); });
    if (it == pool.end()) continue;
    qr::BitVector pivot = std::move(*it);
    pool.erase(it);
    for (qr::BitVector& v : pool) {
      if (v.get(m)) v ^= pivot;
    }
    if (cur.bits[m] != desired.bits[m]) xor_into(cur, pivot);
    pivots.push_back(std::move(pivot));
  }

  // Greedy clean-up over the pivot vectors.
  for (bool improved = true; improved;) {
    improved = false;
    int best_gain = 0;
    const qr::BitVector* best = nullptr;
    for (const qr::BitVector& v : pivots) {
      const int g = flip_gain(cur, desired, v);
      if (g > best_gain) {
        best_gain = g;
        best = &v;
      }
    }
    if (best) {
      xor_into(cur, *best);
      improved = true;
    }
  }

  if (data_distance(cur, desired) > data_distance(target, desired)) return target;
  return cur;
}

}  // namespace artqr::qab
