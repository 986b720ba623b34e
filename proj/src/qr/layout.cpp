#include <algorithm>
#include <array>
#include <bit>
#include <cstdlib>

#include "artqr/error.hpp"
#include "artqr/qr/qr.hpp"

namespace artqr::qr {

namespace {

// Indexed [level][version]; level order L, M, Q, H. Values from the QR standard.
constexpr std::int8_t kEccCodewordsPerBlock[4][41] = {
    {-1, 7, 10, 15, 20, 26, 18, 20, 24, 30, 18, 20, 24, 26, 30, 22, 24, 28, 30, 28, 28,
     28, 28, 30, 30, 26, 28, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30},
    {-1, 10, 16, 26, 18, 24, 16, 18, 22, 22, 26, 30, 22, 22, 24, 24, 28, 28, 26, 26, 26,
     26, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28},
    {-1, 13, 22, 18, 26, 18, 24, 18, 22, 20, 24, 28, 26, 24, 20, 30, 24, 28, 28, 26, 30,
     28, 30, 30, 30, 30, 28, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30},
    {-1, 17, 28, 22, 16, 22, 28, 26, 26, 24, 28, 24, 28, 22, 24, 24, 30, 28, 28, 26, 28,
     30, 24, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30},
};

constexpr std::int8_t kNumEcBlocks[4][41] = {
    {-1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 4, 4, 4, 4, 4, 6, 6, 6, 6, 7, 8,
     8, 9, 9, 10, 12, 12, 12, 13, 14, 15, 16, 17, 18, 19, 19, 20, 21, 22, 24, 25},
    {-1, 1, 1, 1, 2, 2, 4, 4, 4, 5, 5, 5, 8, 9, 9, 10, 10, 11, 13, 14, 16,
     17, 17, 18, 20, 21, 23, 25, 26, 28, 29, 31, 33, 35, 37, 38, 40, 43, 45, 47, 49},
    {-1, 1, 1, 2, 2, 4, 4, 6, 6, 8, 8, 8, 10, 12, 16, 12, 17, 16, 18, 21, 20,
     23, 23, 25, 27, 29, 34, 34, 35, 38, 40, 43, 45, 48, 51, 53, 56, 59, 62, 65, 68},
    {-1, 1, 1, 2, 4, 4, 4, 5, 6, 8, 8, 11, 11, 16, 16, 18, 16, 19, 21, 25, 25,
     25, 34, 30, 32, 35, 37, 40, 42, 45, 48, 51, 54, 57, 60, 63, 66, 70, 74, 77, 81},
};

void check_version(int version) {
  if (version < kMinVersion || version > kMaxVersion) {
    throw Error(ErrorCode::InvalidVersion, "version " + std::to_string(version) + " outside 1..40");
  }
}

int level_index(EcLevel level) { return static_cast<int>(level); }

// Format-info field value for each level (L=01, M=00, Q=11, H=10).
int format_level_bits(EcLevel level) {
  switch (level) {
    case EcLevel::L: return 1;
    case EcLevel::M: return 0;
    case EcLevel::Q: return 3;
    case EcLevel::H: return 2;
  }
  return 0;
}

Layout build_layout(int version) {
  Layout lay;
  lay.version = version;
  lay.n = side_length(version);
  const int n = lay.n;
  lay.roles.assign(static_cast<std::size_t>(n) * n, ModuleRole::Data);
  std::vector<bool> function(static_cast<std::size_t>(n) * n, false);
  auto mark = [&](int row, int col, ModuleRole role) {
    if (row < 0 || col < 0 || row >= n || col >= n) return;
    lay.roles[static_cast<std::size_t>(row) * n + col] = role;
    function[static_cast<std::size_t>(row) * n + col] = true;
  };

  for (int i = 0; i < n; ++i) {
    mark(6, i, ModuleRole::Timing);
    mark(i, 6, ModuleRole::Timing);
  }
  const int centers[3][2] = {{3, 3}, {3, n - 4}, {n - 4, 3}};
  for (const auto& c : centers) {
    for (int dr = -4; dr <= 4; ++dr) {
      for (int dc = -4; dc <= 4; ++dc) mark(c[0] + dr, c[1] + dc, ModuleRole::Finder);
    }
  }
  const std::vector<int> pos = alignment_positions(version);
  const std::size_t na = pos.size();
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < na; ++j) {
      if ((i == 0 && j == 0) || (i == 0 && j == na - 1) || (i == na - 1 && j == 0)) continue;
      for (int dr = -2; dr <= 2; ++dr) {
        for (int dc = -2; dc <= 2; ++dc) mark(pos[i] + dr, pos[j] + dc, ModuleRole::Alignment);
      }
    }
  }
  for (int i = 0; i <= 8; ++i) {
    if (i != 6) {
      mark(8, i, ModuleRole::FormatVersion);
      mark(i, 8, ModuleRole::FormatVersion);
    }
  }
  for (int i = 0; i < 8; ++i) mark(8, n - 1 - i, ModuleRole::FormatVersion);
  for (int i = 0; i < 8; ++i) mark(n - 1 - i, 8, ModuleRole::FormatVersion);  // includes the dark module
  if (version >= 7) {
    for (int i = 0; i < 18; ++i) {
      mark(i / 3, n - 11 + i % 3, ModuleRole::FormatVersion);
      mark(n - 11 + i % 3, i / 3, ModuleRole::FormatVersion);
    }
  }

  const int codeword_bits = raw_codewords(version) * 8;
  for (int right = n - 1; right >= 1; right -= 2) {
    if (right == 6) right = 5;
    for (int vert = 0; vert < n; ++vert) {
      for (int j = 0; j < 2; ++j) {
        const int col = right - j;
        const bool upward = ((right + 1) & 2) == 0;
        const int row = upward ? n - 1 - vert : vert;
        if (function[static_cast<std::size_t>(row) * n + col]) continue;
        if (static_cast<int>(lay.placement.size()) >= codeword_bits) {
          lay.roles[static_cast<std::size_t>(row) * n + col] = ModuleRole::Padding;
        }
        lay.placement.emplace_back(row, col);
      }
    }
  }
  return lay;
}

}  // namespace

std::string_view to_string(EcLevel level) {
  switch (level) {
    case EcLevel::L: return "L";
    case EcLevel::M: return "M";
    case EcLevel::Q: return "Q";
    case EcLevel::H: return "H";
  }
  return "?";
}

EcLevel parse_ec_level(std::string_view text) {
  if (text == "L" || text == "l") return EcLevel::L;
  if (text == "M" || text == "m") return EcLevel::M;
  if (text == "Q" || text == "q") return EcLevel::Q;
  if (text == "H" || text == "h") return EcLevel::H;
  throw Error(ErrorCode::InvalidArgument, "unknown error-correction level '" + std::string(text) + "'");
}

Message Message::from_text(std::string_view text, EcLevel level, int version) {
  return Message{{text.begin(), text.end()}, level, version};
}

int side_length(int version) {
  check_version(version);
  return 17 + 4 * version;
}

int version_for_side(int n) {
  if (n < 21 || (n - 17) % 4 != 0 || (n - 17) / 4 > kMaxVersion) {
    throw Error(ErrorCode::InvalidVersion, "no QR version has side " + std::to_string(n));
  }
  return (n - 17) / 4;
}

int raw_data_modules(int version) {
  check_version(version);
  int result = (16 * version + 128) * version + 64;
  if (version >= 2) {
    const int num_align = version / 7 + 2;
    result -= (25 * num_align - 10) * num_align - 55;
    if (version >= 7) result -= 36;
  }
  return result;
}

int raw_codewords(int version) { return raw_data_modules(version) / 8; }

int ecc_codewords_per_block(int version, EcLevel level) {
  check_version(version);
  return kEccCodewordsPerBlock[level_index(level)][version];
}

int num_ec_blocks(int version, EcLevel level) {
  check_version(version);
  return kNumEcBlocks[level_index(level)][version];
}

int data_codewords(int version, EcLevel level) {
  return raw_codewords(version) - ecc_codewords_per_block(version, level) * num_ec_blocks(version, level);
}

int byte_capacity(int version, EcLevel level) {
  const int count_bits = version <= 9 ? 8 : 16;
  const int cap = (data_codewords(version, level) * 8 - 4 - count_bits) / 8;
  return std::min(cap, (1 << count_bits) - 1);
}

std::vector<int> alignment_positions(int version) {
  check_version(version);
  if (version == 1) return {};
  const int num_align = version / 7 + 2;
  const int step = version == 32 ? 26 : (version * 4 + num_align * 2 + 1) / (2 * num_align - 2) * 2;
  std::vector<int> result;
  for (int i = 0, p = version * 4 + 10; i < num_align - 1; ++i, p -= step) result.insert(result.begin(), p);
  result.insert(result.begin(), 6);
  return result;
}

const Layout& layout_for(int version) {
  check_version(version);
  static const std::array<Layout, kMaxVersion + 1> layouts = [] {
    std::array<Layout, kMaxVersion + 1> all{};
    for (int v = kMinVersion; v <= kMaxVersion; ++v) all[v] = build_layout(v);
    return all;
  }();
  return layouts[version];
}

BlockStructure block_structure(int version, EcLevel level) {
  BlockStructure bs;
  const int blocks = num_ec_blocks(version, level);
  bs.ecc_len = ecc_codewords_per_block(version, level);
  const int raw = raw_codewords(version);
  const int short_blocks = blocks - raw % blocks;
  const int short_len = raw / blocks;  // includes EC
  int max_data = 0;
  for (int b = 0; b < blocks; ++b) {
    const int len = short_len - bs.ecc_len + (b < short_blocks ? 0 : 1);
    bs.data_len.push_back(len);
    max_data = std::max(max_data, len);
  }
  for (int i = 0; i < max_data; ++i) {
    for (int b = 0; b < blocks; ++b) {
      if (i < bs.data_len[b]) bs.order.emplace_back(b, i);
    }
  }
  for (int i = 0; i < bs.ecc_len; ++i) {
    for (int b = 0; b < blocks; ++b) bs.order.emplace_back(b, bs.data_len[b] + i);
  }
  return bs;
}

bool mask_bit(int mask, int row, int col) {
  const int x = col;
  const int y = row;
  switch (mask) {
    case 0: return (x + y) % 2 == 0;
    case 1: return y % 2 == 0;
    case 2: return x % 3 == 0;
    case 3: return (x + y) % 3 == 0;
    case 4: return (x / 3 + y / 2) % 2 == 0;
    case 5: return x * y % 2 + x * y % 3 == 0;
    case 6: return (x * y % 2 + x * y % 3) % 2 == 0;
    case 7: return ((x + y) % 2 + x * y % 3) % 2 == 0;
    default: throw Error(ErrorCode::InvalidArgument, "mask must be in 0..7");
  }
}

int format_word(EcLevel level, int mask) {
  if (mask < 0 || mask > 7) throw Error(ErrorCode::InvalidArgument, "mask must be in 0..7");
  const int data = format_level_bits(level) << 3 | mask;
  int rem = data;
  for (int i = 0; i < 10; ++i) rem = (rem << 1) ^ ((rem >> 9) * 0x537);
  return (data << 10 | rem) ^ 0x5412;
}

std::optional<std::pair<EcLevel, int>> decode_format_word(int word, int max_distance) {
  int best = max_distance + 1;
  std::optional<std::pair<EcLevel, int>> result;
  for (EcLevel level : {EcLevel::L, EcLevel::M, EcLevel::Q, EcLevel::H}) {
    for (int mask = 0; mask < 8; ++mask) {
      const int d = std::popcount(static_cast<unsigned>(word ^ format_word(level, mask)));
      if (d < best) {
        best = d;
        result = std::make_pair(level, mask);
      }
    }
  }
  return result;
}

int version_word(int version) {
  check_version(version);
  int rem = version;
  for (int i = 0; i < 12; ++i) rem = (rem << 1) ^ ((rem >> 11) * 0x1F25);
  return version << 12 | rem;
}

CodeTarget layout_codewords(int version, EcLevel level, int mask, const std::vector<std::uint8_t>& interleaved) {
  const Layout& lay = layout_for(version);
  if (static_cast<int>(interleaved.size()) != raw_codewords(version)) {
    throw Error(ErrorCode::InvalidArgument, "codeword count does not match version");
  }
  if (mask < 0 || mask > 7) throw Error(ErrorCode::InvalidArgument, "mask must be in 0..7");
  const int n = lay.n;
  // Work in "dark" space (true = black) and convert at the end.
  std::vector<bool> dark(static_cast<std::size_t>(n) * n, false);
  auto set = [&](int row, int col, bool d) {
    if (row >= 0 && col >= 0 && row < n && col < n) dark[static_cast<std::size_t>(row) * n + col] = d;
  };

  for (int i = 0; i < n; ++i) {
    set(6, i, i % 2 == 0);
    set(i, 6, i % 2 == 0);
  }
  const int centers[3][2] = {{3, 3}, {3, n - 4}, {n - 4, 3}};
  for (const auto& c : centers) {
    for (int dr = -4; dr <= 4; ++dr) {
      for (int dc = -4; dc <= 4; ++dc) {
        const int dist = std::max(std::abs(dr), std::abs(dc));
        set(c[0] + dr, c[1] + dc, dist != 2 && dist != 4);
      }
    }
  }
  const std::vector<int> pos = alignment_positions(version);
  const std::size_t na = pos.size();
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < na; ++j) {
      if ((i == 0 && j == 0) || (i == 0 && j == na - 1) || (i == na - 1 && j == 0)) continue;
      for (int dr = -2; dr <= 2; ++dr) {
        for (int dc = -2; dc <= 2; ++dc) set(pos[i] + dr, pos[j] + dc, std::max(std::abs(dr), std::abs(dc)) != 1);
      }
    }
  }

  const int fw = format_word(level, mask);
  auto fbit = [fw](int i) { return ((fw >> i) & 1) != 0; };
  for (int i = 0; i <= 5; ++i) set(i, 8, fbit(i));
  set(7, 8, fbit(6));
  set(8, 8, fbit(7));
  set(8, 7, fbit(8));
  for (int i = 9; i < 15; ++i) set(8, 14 - i, fbit(i));
  for (int i = 0; i < 8; ++i) set(8, n - 1 - i, fbit(i));
  for (int i = 8; i < 15; ++i) set(n - 15 + i, 8, fbit(i));
  set(n - 8, 8, true);
  if (version >= 7) {
    const int vw = version_word(version);
    for (int i = 0; i < 18; ++i) {
      const bool b = ((vw >> i) & 1) != 0;
      set(i / 3, n - 11 + i % 3, b);
      set(n - 11 + i % 3, i / 3, b);
    }
  }

  const std::size_t bits = interleaved.size() * 8;
  for (std::size_t i = 0; i < lay.placement.size(); ++i) {
    const auto [row, col] = lay.placement[i];
    bool d = false;
    if (i < bits) d = ((interleaved[i >> 3] >> (7 - (i & 7))) & 1) != 0;
    if (mask_bit(mask, row, col)) d = !d;
    set(row, col, d);
  }

  CodeTarget t;
  t.n = n;
  t.version = version;
  t.ec_level = level;
  t.mask = mask;
  t.roles = lay.roles;
  t.bits.resize(dark.size());
  for (std::size_t i = 0; i < dark.size(); ++i) t.bits[i] = dark[i] ? 0 : 1;
  return t;
}

std::vector<std::array<std::pair<int, int>, 8>> codeword_modules(int version) {
  const Layout& lay = layout_for(version);
  std::vector<std::array<std::pair<int, int>, 8>> out(static_cast<std::size_t>(raw_codewords(version)));
  for (std::size_t i = 0; i < out.size() * 8; ++i) out[i >> 3][i & 7] = lay.placement[i];
  return out;
}

}  // namespace artqr::qr
