#include "artqr/qr/reed_solomon.hpp"

#include <array>

#include "artqr/error.hpp"

namespace artqr::qr {

namespace {

struct Tables {
  std::array<std::uint8_t, 512> exp{};
  std::array<int, 256> log{};

  constexpr Tables() {
    int x = 1;
    for (int i = 0; i < 255; ++i) {
      exp[i] = static_cast<std::uint8_t>(x);
      log[x] = i;
      x <<= 1;
      if (x & 0x100) x ^= 0x11D;
    }
    for (int i = 255; i < 512; ++i) exp[i] = exp[i - 255];
  }
};

constexpr Tables kTables{};

// Polynomials below are stored lowest degree first.
std::uint8_t eval_low_first(const std::vector<std::uint8_t>& p, std::uint8_t x) {
  std::uint8_t y = 0;
  for (std::size_t i = p.size(); i-- > 0;) y = static_cast<std::uint8_t>(gf256::mul(y, x) ^ p[i]);
  return y;
}

}  // namespace

namespace gf256 {

std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
  if (a == 0 || b == 0) return 0;
  return kTables.exp[kTables.log[a] + kTables.log[b]];
}

std::uint8_t div(std::uint8_t a, std::uint8_t b) {
  if (b == 0) throw Error(ErrorCode::InvalidArgument, "GF(256) division by zero");
  if (a == 0) return 0;
  return kTables.exp[(kTables.log[a] + 255 - kTables.log[b]) % 255];
}

std::uint8_t pow_alpha(int e) {
  e %= 255;
  if (e < 0) e += 255;
  return kTables.exp[e];
}

int log(std::uint8_t a) {
  if (a == 0) throw Error(ErrorCode::InvalidArgument, "log of zero in GF(256)");
  return kTables.log[a];
}

}  // namespace gf256

std::vector<std::uint8_t> rs_generator(int degree) {
  if (degree < 1 || degree > 254) throw Error(ErrorCode::InvalidArgument, "RS degree out of range");
  // Monic polynomial, highest degree first, leading 1 dropped.
  std::vector<std::uint8_t> result(static_cast<std::size_t>(degree), 0);
  result.back() = 1;
  std::uint8_t root = 1;
  for (int i = 0; i < degree; ++i) {
    for (std::size_t j = 0; j < result.size(); ++j) {
      result[j] = gf256::mul(result[j], root);
      if (j + 1 < result.size()) result[j] ^= result[j + 1];
    }
    root = gf256::mul(root, 0x02);
  }
  return result;
}

std::vector<std::uint8_t> rs_remainder(std::span<const std::uint8_t> data, std::span<const std::uint8_t> generator) {
  std::vector<std::uint8_t> rem(generator.size(), 0);
  for (std::uint8_t b : data) {
    const std::uint8_t factor = b ^ rem.front();
    rem.erase(rem.begin());
    rem.push_back(0);
    for (std::size_t i = 0; i < rem.size(); ++i) rem[i] ^= gf256::mul(generator[i], factor);
  }
  return rem;
}

int rs_correct(std::span<std::uint8_t> block, int ecc_len) {
  const int total = static_cast<int>(block.size());
  if (ecc_len <= 0 || ecc_len >= total) throw Error(ErrorCode::InvalidArgument, "bad RS block geometry");

  // Received word r(x) = sum block[i] x^(total-1-i); syndromes S_j = r(alpha^j).
  std::vector<std::uint8_t> syndromes(static_cast<std::size_t>(ecc_len));
  bool clean = true;
  for (int j = 0; j < ecc_len; ++j) {
    std::uint8_t s = 0;
    const std::uint8_t x = gf256::pow_alpha(j);
    for (std::uint8_t b : block) s = static_cast<std::uint8_t>(gf256::mul(s, x) ^ b);
    syndromes[j] = s;
    clean = clean && s == 0;
  }
  if (clean) return 0;

  // Berlekamp-Massey for the error locator Lambda (lowest degree first).
  std::vector<std::uint8_t> lambda{1};
  std::vector<std::uint8_t> prev{1};
  int degree = 0;
  int shift = 1;
  std::uint8_t prev_disc = 1;
  for (int k = 0; k < ecc_len; ++k) {
    std::uint8_t disc = syndromes[k];
    for (int i = 1; i <= degree && i < static_cast<int>(lambda.size()); ++i) {
      disc ^= gf256::mul(lambda[i], syndromes[k - i]);
    }
    if (disc == 0) {
      ++shift;
      continue;
    }
    const std::uint8_t coef = gf256::div(disc, prev_disc);
    std::vector<std::uint8_t> next = lambda;
    if (next.size() < prev.size() + shift) next.resize(prev.size() + shift, 0);
    for (std::size_t i = 0; i < prev.size(); ++i) next[i + shift] ^= gf256::mul(coef, prev[i]);
    if (2 * degree <= k) {
      prev = lambda;
      degree = k + 1 - degree;
      prev_disc = disc;
      shift = 1;
    } else {
      ++shift;
    }
    lambda = std::move(next);
  }
  while (lambda.size() > 1 && lambda.back() == 0) lambda.pop_back();
  const int lambda_degree = static_cast<int>(lambda.size()) - 1;
  if (lambda_degree != degree || 2 * degree > ecc_len) {
    throw Error(ErrorCode::Unrecoverable, "too many symbol errors in RS block");
  }

  // Chien search: an error at power p (block index total-1-p) means Lambda(alpha^-p) = 0.
  std::vector<int> powers;
  for (int p = 0; p < total; ++p) {
    if (eval_low_first(lambda, gf256::pow_alpha(-p)) == 0) powers.push_back(p);
  }
  if (static_cast<int>(powers.size()) != degree) {
    throw Error(ErrorCode::Unrecoverable, "error locator roots do not match its degree");
  }

  // Forney with first consecutive root alpha^0: e = X * Omega(X^-1) / Lambda'(X^-1).
  std::vector<std::uint8_t> omega(static_cast<std::size_t>(ecc_len), 0);
  for (int i = 0; i < ecc_len; ++i) {
    for (int j = 0; j <= i && j < static_cast<int>(lambda.size()); ++j) {
      omega[i] ^= gf256::mul(syndromes[i - j], lambda[j]);
    }
  }
  std::vector<std::uint8_t> dlambda(lambda.size() > 1 ? lambda.size() - 1 : 1, 0);
  for (std::size_t i = 1; i < lambda.size(); i += 2) dlambda[i - 1] = lambda[i];

  for (int p : powers) {
    const std::uint8_t x = gf256::pow_alpha(p);
    const std::uint8_t x_inv = gf256::pow_alpha(-p);
    const std::uint8_t denom = eval_low_first(dlambda, x_inv);
    if (denom == 0) throw Error(ErrorCode::Unrecoverable, "degenerate error locator derivative");
    const std::uint8_t magnitude = gf256::mul(x, gf256::div(eval_low_first(omega, x_inv), denom));
    block[total - 1 - p] ^= magnitude;
  }

  for (int j = 0; j < ecc_len; ++j) {
    std::uint8_t s = 0;
    const std::uint8_t x = gf256::pow_alpha(j);
    for (std::uint8_t b : block) s = static_cast<std::uint8_t>(gf256::mul(s, x) ^ b);
    if (s != 0) throw Error(ErrorCode::Unrecoverable, "RS correction left a non-zero syndrome");
  }
  return degree;
}

}  // namespace artqr::qr
