#include "artqr/qr/gf2.hpp"

#include <bit>

namespace artqr::qr {

BitVector& BitVector::operator^=(const BitVector& other) {
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

std::size_t BitVector::popcount() const {
  std::size_t c = 0;
  for (std::uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::size_t BitVector::overlap(const BitVector& other) const {
  std::size_t c = 0;
  for (std::size_t w = 0; w < words_.size(); ++w) c += static_cast<std::size_t>(std::popcount(words_[w] & other.words_[w]));
  return c;
}

bool BitVector::any() const {
  for (std::uint64_t w : words_) {
    if (w != 0) return true;
  }
  return false;
}

std::size_t gf2_rank(std::span<const BitVector> rows) {
  std::vector<BitVector> m(rows.begin(), rows.end());
  if (m.empty()) return 0;
  const std::size_t cols = m.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < m.size() && !m[pivot].get(c)) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[rank], m[pivot]);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r != rank && m[r].get(c)) m[r] ^= m[rank];
    }
    ++rank;
  }
  return rank;
}

}  // namespace artqr::qr
