#pragma once

#include <vector>

#include "artqr/qr/gf2.hpp"
#include "artqr/qr/qr.hpp"

namespace artqr::qr {

/// Basis of module flips that keep the decoded message intact.
///
/// Each vector flips one bit of a padding byte together with the EC bits that
/// the flip induces in its block, so every XOR combination of vectors applied
/// to the encoded layout is again a valid codeword layout.
struct FreeBitBasis {
  int n = 0;
  std::vector<BitVector> vectors;  // n*n bits, index row*n + col

  std::size_t rank() const noexcept { return vectors.size(); }
};

FreeBitBasis compute_free_bit_basis(const Message& msg, const CodeTarget& target);

/// XOR a module mask into a layout.
CodeTarget apply_flips(const CodeTarget& target, const BitVector& flips);

}  // namespace artqr::qr
