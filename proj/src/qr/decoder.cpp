#include <bit>

#include "artqr/error.hpp"
#include "artqr/qr/qr.hpp"
#include "artqr/qr/reed_solomon.hpp"

namespace artqr::qr {

namespace {

bool dark_at(const CodeTarget& t, int row, int col) { return t.bit(row, col) == 0; }

std::pair<EcLevel, int> read_format(const CodeTarget& t) {
  const int n = t.n;
  int first = 0;
  for (int i = 0; i <= 5; ++i) first |= dark_at(t, i, 8) << i;
  first |= dark_at(t, 7, 8) << 6;
  first |= dark_at(t, 8, 8) << 7;
  first |= dark_at(t, 8, 7) << 8;
  for (int i = 9; i < 15; ++i) first |= dark_at(t, 8, 14 - i) << i;

  int second = 0;
  for (int i = 0; i < 8; ++i) second |= dark_at(t, 8, n - 1 - i) << i;
  for (int i = 8; i < 15; ++i) second |= dark_at(t, n - 15 + i, 8) << i;

  // Pick the copy closest to a valid word.
  std::optional<std::pair<EcLevel, int>> best;
  int best_distance = 4;
  for (int word : {first, second}) {
    for (EcLevel level : {EcLevel::L, EcLevel::M, EcLevel::Q, EcLevel::H}) {
      for (int mask = 0; mask < 8; ++mask) {
        const int d = std::popcount(static_cast<unsigned>(word ^ format_word(level, mask)));
        if (d < best_distance) {
          best_distance = d;
          best = std::make_pair(level, mask);
        }
      }
    }
  }
  if (!best) throw Error(ErrorCode::FormatError, "format information unreadable");
  return *best;
}

class BitReader {
 public:
  explicit BitReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}
  std::size_t remaining() const { return bytes_.size() * 8 - pos_; }
  std::uint32_t read(int count) {
    if (static_cast<std::size_t>(count) > remaining()) throw Error(ErrorCode::FormatError, "bit stream truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < count; ++i, ++pos_) v = (v << 1) | ((bytes_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1U);
    return v;
  }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

constexpr char kAlnum[] = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ $%*+-./:";

std::vector<std::uint8_t> parse_segments(const std::vector<std::uint8_t>& data, int version) {
  const int size_class = version <= 9 ? 0 : (version <= 26 ? 1 : 2);
  BitReader br(data);
  std::vector<std::uint8_t> out;
  while (br.remaining() >= 4) {
    const std::uint32_t mode = br.read(4);
    if (mode == 0) break;
    if (mode == 0x4) {
      const int count_bits = size_class == 0 ? 8 : 16;
      const std::uint32_t count = br.read(count_bits);
      for (std::uint32_t i = 0; i < count; ++i) out.push_back(static_cast<std::uint8_t>(br.read(8)));
    } else if (mode == 0x1) {
      const int count_bits = size_class == 0 ? 10 : (size_class == 1 ? 12 : 14);
      std::uint32_t count = br.read(count_bits);
      while (count >= 3) {
        const std::uint32_t v = br.read(10);
        if (v > 999) throw Error(ErrorCode::FormatError, "invalid numeric triple");
        for (int d : {100, 10, 1}) out.push_back(static_cast<std::uint8_t>('0' + (v / d) % 10));
        count -= 3;
      }
      if (count == 2) {
        const std::uint32_t v = br.read(7);
        if (v > 99) throw Error(ErrorCode::FormatError, "invalid numeric pair");
        out.push_back(static_cast<std::uint8_t>('0' + v / 10));
        out.push_back(static_cast<std::uint8_t>('0' + v % 10));
      } else if (count == 1) {
        const std::uint32_t v = br.read(4);
        if (v > 9) throw Error(ErrorCode::FormatError, "invalid numeric digit");
        out.push_back(static_cast<std::uint8_t>('0' + v));
      }
    } else if (mode == 0x2) {
      const int count_bits = size_class == 0 ? 9 : (size_class == 1 ? 11 : 13);
      std::uint32_t count = br.read(count_bits);
      while (count >= 2) {
        const std::uint32_t v = br.read(11);
        if (v >= 45 * 45) throw Error(ErrorCode::FormatError, "invalid alphanumeric pair");
        out.push_back(static_cast<std::uint8_t>(kAlnum[v / 45]));
        out.push_back(static_cast<std::uint8_t>(kAlnum[v % 45]));
        count -= 2;
      }
      if (count == 1) {
        const std::uint32_t v = br.read(6);
        if (v >= 45) throw Error(ErrorCode::FormatError, "invalid alphanumeric char");
        out.push_back(static_cast<std::uint8_t>(kAlnum[v]));
      }
    } else if (mode == 0x7) {
      // ECI designator: skip, payload bytes are passed through unchanged.
      const std::uint32_t first = br.read(8);
      if ((first & 0x80) == 0) {
      } else if ((first & 0xC0) == 0x80) {
        br.read(8);
      } else {
        br.read(16);
      }
    } else {
      throw Error(ErrorCode::FormatError, "unsupported segment mode " + std::to_string(mode));
    }
  }
  return out;
}

}  // namespace

DecodedPayload decode_payload(const CodeTarget& target) {
  const int version = version_for_side(target.n);
  if (target.bits.size() != static_cast<std::size_t>(target.n) * target.n) {
    throw Error(ErrorCode::FormatError, "module matrix size mismatch");
  }
  const auto [level, mask] = read_format(target);
  const Layout& lay = layout_for(version);

  const int raw = raw_codewords(version);
  std::vector<std::uint8_t> interleaved(static_cast<std::size_t>(raw), 0);
  for (int i = 0; i < raw * 8; ++i) {
    const auto [row, col] = lay.placement[i];
    bool d = dark_at(target, row, col);
    if (mask_bit(mask, row, col)) d = !d;
    if (d) interleaved[i >> 3] |= static_cast<std::uint8_t>(0x80 >> (i & 7));
  }

  const BlockStructure bs = block_structure(version, level);
  std::vector<std::vector<std::uint8_t>> blocks(bs.data_len.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) blocks[b].resize(static_cast<std::size_t>(bs.data_len[b] + bs.ecc_len));
  for (std::size_t i = 0; i < bs.order.size(); ++i) blocks[bs.order[i].first][bs.order[i].second] = interleaved[i];

  DecodedPayload result;
  std::vector<std::uint8_t> data;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    result.corrected_errors += rs_correct(blocks[b], bs.ecc_len);
    data.insert(data.end(), blocks[b].begin(), blocks[b].begin() + bs.data_len[b]);
  }
  for (std::size_t i = 0; i < bs.order.size(); ++i) interleaved[i] = blocks[bs.order[i].first][bs.order[i].second];

  result.message = Message{parse_segments(data, version), level, version};
  result.mask = mask;
  result.codewords = std::move(interleaved);
  return result;
}

Message rs_decode_payload(const CodeTarget& target) { return decode_payload(target).message; }

}  // namespace artqr::qr
