#include "artqr/qr/free_basis.hpp"

#include "artqr/error.hpp"
#include "artqr/qr/reed_solomon.hpp"

namespace artqr::qr {

FreeBitBasis compute_free_bit_basis(const Message& msg, const CodeTarget& target) {
  if (target.version != msg.version || target.ec_level != msg.ec_level) {
    throw Error(ErrorCode::InvalidArgument, "target was not produced from this message");
  }
  const DataStream ds = build_data_stream(msg);
  const BlockStructure bs = block_structure(msg.version, msg.ec_level);
  const std::vector<std::uint8_t> gen = rs_generator(bs.ecc_len);
  const auto modules = codeword_modules(msg.version);

  // (block, position) -> interleaved codeword index.
  std::vector<std::vector<int>> where(bs.data_len.size());
  for (std::size_t b = 0; b < where.size(); ++b) where[b].resize(static_cast<std::size_t>(bs.data_len[b] + bs.ecc_len));
  for (std::size_t i = 0; i < bs.order.size(); ++i) where[bs.order[i].first][bs.order[i].second] = static_cast<int>(i);

  FreeBitBasis basis;
  basis.n = target.n;
  const std::size_t cells = static_cast<std::size_t>(target.n) * target.n;
  auto flip_codeword_bits = [&](BitVector& v, int codeword, std::uint8_t delta) {
    for (int bit = 0; bit < 8; ++bit) {
      if ((delta >> (7 - bit)) & 1) {
        const auto [row, col] = modules[codeword][bit];
        v.flip(static_cast<std::size_t>(row) * target.n + col);
      }
    }
  };

  int block_start = 0;
  for (std::size_t b = 0; b < bs.data_len.size(); ++b) {
    const int len = bs.data_len[b];
    for (int pos = 0; pos < len; ++pos) {
      if (block_start + pos < ds.pad_start) continue;
      for (int bit = 0; bit < 8; ++bit) {
        std::vector<std::uint8_t> delta(static_cast<std::size_t>(len), 0);
        delta[pos] = static_cast<std::uint8_t>(0x80 >> bit);
        // RS encoding is linear over GF(2), so the EC change of a unit data flip
        // is the remainder of that flip alone.
        const auto ecc_delta = rs_remainder(delta, gen);
        BitVector v(cells);
        flip_codeword_bits(v, where[b][pos], delta[pos]);
        for (int e = 0; e < bs.ecc_len; ++e) flip_codeword_bits(v, where[b][len + e], ecc_delta[e]);
        basis.vectors.push_back(std::move(v));
      }
    }
    block_start += len;
  }
  return basis;
}

CodeTarget apply_flips(const CodeTarget& target, const BitVector& flips) {
  if (flips.size() != target.bits.size()) throw Error(ErrorCode::DimensionMismatch, "flip mask size mismatch");
  CodeTarget out = target;
  for (std::size_t i = 0; i < out.bits.size(); ++i) {
    if (flips.get(i)) out.bits[i] ^= 1;
  }
  return out;
}

}  // namespace artqr::qr
