#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace artqr::qr {

/// Fixed-length vector over GF(2), packed in 64-bit words.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const noexcept { return size_; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i, bool value) {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= bit;
    } else {
      words_[i >> 6] &= ~bit;
    }
  }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  BitVector& operator^=(const BitVector& other);
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

  std::size_t popcount() const;
  // popcount(*this & other)
  std::size_t overlap(const BitVector& other) const;
  bool any() const;

  bool operator==(const BitVector&) const = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Rank over GF(2) by Gaussian elimination on a copy of the rows.
std::size_t gf2_rank(std::span<const BitVector> rows);

}  // namespace artqr::qr
