#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace artqr::qr {

/// GF(2^8) arithmetic over the QR field polynomial x^8 + x^4 + x^3 + x^2 + 1.
namespace gf256 {
std::uint8_t mul(std::uint8_t a, std::uint8_t b);
std::uint8_t div(std::uint8_t a, std::uint8_t b);
std::uint8_t pow_alpha(int e);  // alpha^e, any integer e
int log(std::uint8_t a);        // a != 0
}  // namespace gf256

/// Generator polynomial prod_{i<degree} (x - alpha^i), leading coefficient
/// omitted, highest degree first.
std::vector<std::uint8_t> rs_generator(int degree);

/// EC codewords for one block: remainder of data(x) * x^degree divided by the generator.
std::vector<std::uint8_t> rs_remainder(std::span<const std::uint8_t> data, std::span<const std::uint8_t> generator);

/// Corrects a received block (data followed by ecc_len EC codewords) in place.
/// Returns the number of corrected symbol errors; throws Error(Unrecoverable)
/// when the block holds more errors than ecc_len / 2.
int rs_correct(std::span<std::uint8_t> block, int ecc_len);

}  // namespace artqr::qr
