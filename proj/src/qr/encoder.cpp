#include "artqr/error.hpp"
#include "artqr/qr/qr.hpp"
#include "artqr/qr/reed_solomon.hpp"

namespace artqr::qr {

namespace {

class BitWriter {
 public:
  void append(std::uint32_t value, int count) {
    for (int i = count - 1; i >= 0; --i) bits_.push_back(((value >> i) & 1U) != 0);
  }
  std::size_t size() const { return bits_.size(); }

  std::vector<std::uint8_t> bytes() const {
    std::vector<std::uint8_t> out(bits_.size() / 8, 0);
    for (std::size_t i = 0; i < out.size() * 8; ++i) {
      if (bits_[i]) out[i >> 3] |= static_cast<std::uint8_t>(0x80 >> (i & 7));
    }
    return out;
  }

 private:
  std::vector<bool> bits_;
};

}  // namespace

DataStream build_data_stream(const Message& msg) {
  const int version = msg.version;
  if (version < kMinVersion || version > kMaxVersion) {
    throw Error(ErrorCode::InvalidVersion, "version " + std::to_string(version) + " outside 1..40");
  }
  const int capacity = byte_capacity(version, msg.ec_level);
  if (static_cast<int>(msg.bytes.size()) > capacity) {
    throw Error(ErrorCode::CapacityExceeded, std::to_string(msg.bytes.size()) + " bytes exceed capacity " +
                                                 std::to_string(capacity) + " of version " + std::to_string(version) +
                                                 "-" + std::string(to_string(msg.ec_level)));
  }
  const std::size_t capacity_bits = static_cast<std::size_t>(data_codewords(version, msg.ec_level)) * 8;

  BitWriter bw;
  bw.append(0x4, 4);  // byte mode
  bw.append(static_cast<std::uint32_t>(msg.bytes.size()), version <= 9 ? 8 : 16);
  for (std::uint8_t b : msg.bytes) bw.append(b, 8);
  bw.append(0, static_cast<int>(std::min<std::size_t>(4, capacity_bits - bw.size())));
  bw.append(0, static_cast<int>((8 - bw.size() % 8) % 8));

  DataStream ds;
  ds.codewords = bw.bytes();
  ds.pad_start = static_cast<int>(ds.codewords.size());
  for (std::uint8_t pad = 0xEC; ds.codewords.size() * 8 < capacity_bits; pad ^= 0xEC ^ 0x11) {
    ds.codewords.push_back(pad);
  }
  return ds;
}

std::vector<std::uint8_t> add_error_correction(const std::vector<std::uint8_t>& data, int version, EcLevel level) {
  if (static_cast<int>(data.size()) != data_codewords(version, level)) {
    throw Error(ErrorCode::InvalidArgument, "data codeword count does not match version/level");
  }
  const BlockStructure bs = block_structure(version, level);
  const std::vector<std::uint8_t> gen = rs_generator(bs.ecc_len);
  std::vector<std::vector<std::uint8_t>> blocks;
  std::size_t k = 0;
  for (int len : bs.data_len) {
    std::vector<std::uint8_t> block(data.begin() + static_cast<std::ptrdiff_t>(k),
                                    data.begin() + static_cast<std::ptrdiff_t>(k + len));
    k += static_cast<std::size_t>(len);
    const auto ecc = rs_remainder(block, gen);
    block.insert(block.end(), ecc.begin(), ecc.end());
    blocks.push_back(std::move(block));
  }
  std::vector<std::uint8_t> out;
  out.reserve(bs.order.size());
  for (const auto& [b, i] : bs.order) out.push_back(blocks[b][i]);
  return out;
}

CodeTarget encode_message(const Message& msg, int mask) {
  if (mask < 0 || mask > 7) throw Error(ErrorCode::InvalidArgument, "mask must be in 0..7");
  const DataStream ds = build_data_stream(msg);
  return layout_codewords(msg.version, msg.ec_level, mask, add_error_correction(ds.codewords, msg.version, msg.ec_level));
}

}  // namespace artqr::qr
