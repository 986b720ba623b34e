#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace artqr::qr {

inline constexpr int kMinVersion = 1;
inline constexpr int kMaxVersion = 40;
inline constexpr int kDefaultVersion = 5;

enum class EcLevel { L, M, Q, H };

std::string_view to_string(EcLevel level);
EcLevel parse_ec_level(std::string_view text);

struct Message {
  std::vector<std::uint8_t> bytes;
  EcLevel ec_level = EcLevel::H;
  int version = kDefaultVersion;

  static Message from_text(std::string_view text, EcLevel level = EcLevel::H, int version = kDefaultVersion);
  std::string text() const { return {bytes.begin(), bytes.end()}; }

  bool operator==(const Message&) const = default;
};

enum class ModuleRole : std::uint8_t { Finder, Alignment, Timing, FormatVersion, Data, Padding };

inline bool is_function_role(ModuleRole r) { return r != ModuleRole::Data && r != ModuleRole::Padding; }
// Finder (with separators) and alignment patterns: the marker regions.
inline bool is_marker_role(ModuleRole r) { return r == ModuleRole::Finder || r == ModuleRole::Alignment; }

/// n x n module colours (1 white, 0 black) plus the role of every module.
struct CodeTarget {
  int n = 0;
  int version = 0;
  EcLevel ec_level = EcLevel::H;
  int mask = 0;
  std::vector<std::uint8_t> bits;
  std::vector<ModuleRole> roles;

  std::uint8_t bit(int row, int col) const { return bits[static_cast<std::size_t>(row) * n + col]; }
  ModuleRole role(int row, int col) const { return roles[static_cast<std::size_t>(row) * n + col]; }
  void set_bit(int row, int col, std::uint8_t v) { bits[static_cast<std::size_t>(row) * n + col] = v; }

  bool operator==(const CodeTarget&) const = default;
};

// ---- Version tables --------------------------------------------------------

int side_length(int version);  // 17 + 4 * version
int version_for_side(int n);   // throws InvalidVersion if n is not a valid side
int raw_data_modules(int version);
int raw_codewords(int version);
int ecc_codewords_per_block(int version, EcLevel level);
int num_ec_blocks(int version, EcLevel level);
int data_codewords(int version, EcLevel level);
// Correctable symbol errors per block.
inline int correction_capacity(int version, EcLevel level) { return ecc_codewords_per_block(version, level) / 2; }
// Longest byte-mode payload.
int byte_capacity(int version, EcLevel level);
std::vector<int> alignment_positions(int version);

// ---- Layout -----------------------------------------------------------------

/// Role map and codeword placement for one version.
struct Layout {
  int version = 0;
  int n = 0;
  std::vector<ModuleRole> roles;
  // Non-function modules in zig-zag placement order. The first
  // 8 * raw_codewords entries carry codeword bits (MSB first); the rest are
  // remainder bits.
  std::vector<std::pair<int, int>> placement;  // (row, col)
};

const Layout& layout_for(int version);

/// Data/EC codeword interleaving for (version, level).
struct BlockStructure {
  int ecc_len = 0;
  std::vector<int> data_len;  // per block
  // Interleaved codeword index -> (block, position within block incl. EC).
  std::vector<std::pair<int, int>> order;
};

BlockStructure block_structure(int version, EcLevel level);

bool mask_bit(int mask, int row, int col);

/// 15-bit format word (with the 0x5412 mask applied) and its decoder.
int format_word(EcLevel level, int mask);
std::optional<std::pair<EcLevel, int>> decode_format_word(int word, int max_distance = 3);
int version_word(int version);

/// Places interleaved codewords (data + EC) into a fresh matrix with all
/// function patterns, the given mask and format information.
CodeTarget layout_codewords(int version, EcLevel level, int mask, const std::vector<std::uint8_t>& interleaved);

// ---- Encoding ----------------------------------------------------------------

/// Byte-mode data codewords (header, payload, terminator, padding) for msg.
struct DataStream {
  std::vector<std::uint8_t> codewords;
  int pad_start = 0;  // index of the first 0xEC/0x11 padding byte
};

DataStream build_data_stream(const Message& msg);

/// Interleaved data + EC codewords for a data stream.
std::vector<std::uint8_t> add_error_correction(const std::vector<std::uint8_t>& data, int version, EcLevel level);

CodeTarget encode_message(const Message& msg, int mask = 0);

// ---- Decoding ----------------------------------------------------------------

struct DecodedPayload {
  Message message;
  int mask = 0;
  int corrected_errors = 0;
  std::vector<std::uint8_t> codewords;  // corrected, interleaved
};

DecodedPayload decode_payload(const CodeTarget& target);
Message rs_decode_payload(const CodeTarget& target);

/// Interleaved codeword index -> the 8 module coordinates holding its bits, MSB first.
std::vector<std::array<std::pair<int, int>, 8>> codeword_modules(int version);

}  // namespace artqr::qr
