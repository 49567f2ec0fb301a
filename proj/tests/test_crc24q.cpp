#include "b2bsdr/crc24q.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace crc = b2bsdr::crc24q;

namespace {

// Oracle: textbook GF(2) long division.  Append 24 zero bits, divide by the
// 25-bit generator 0x1864CFB, remainder is the CRC.
std::uint32_t crc_longdiv(const std::vector<std::uint8_t>& bits) {
  std::vector<std::uint8_t> work(bits);
  work.insert(work.end(), 24, 0);
  const std::uint32_t gen = 0x1864CFB;
  for (std::size_t i = 0; i + 24 < work.size(); ++i) {
    if (!work[i]) continue;
    for (int j = 0; j <= 24; ++j) work[i + j] ^= (gen >> (24 - j)) & 1u;
  }
  std::uint32_t rem = 0;
  for (std::size_t i = work.size() - 24; i < work.size(); ++i) rem = (rem << 1) | work[i];
  return rem;
}

std::vector<std::uint8_t> ascii_bits(const std::string& s) {
  std::vector<std::uint8_t> bits;
  for (unsigned char c : s)
    for (int i = 7; i >= 0; --i) bits.push_back((c >> i) & 1u);
  return bits;
}

std::vector<std::uint8_t> random_bits(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::uint8_t> bits(n);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1u);
  return bits;
}

// Divide a GF(2) polynomial (MSB-aligned in a uint64) by (x + 1).
std::pair<std::uint64_t, int> divide_by_x_plus_1(std::uint64_t poly, int degree) {
  std::uint64_t quotient = 0;
  std::uint64_t rem = poly;
  for (int d = degree; d >= 1; --d) {
    if ((rem >> d) & 1u) {
      quotient |= 1ull << (d - 1);
      rem ^= (3ull << (d - 1));  // (x + 1) * x^(d-1)
    }
  }
  return {quotient, static_cast<int>(rem & 1u)};
}

// Carry-less multiply mod a degree-23 polynomial (bit pattern includes x^23).
std::uint64_t polymulmod(std::uint64_t a, std::uint64_t b, std::uint64_t mod) {
  std::uint64_t prod = 0;
  for (int i = 0; i < 24; ++i)
    if ((a >> i) & 1u) prod ^= b << i;
  for (int d = 46; d >= 23; --d)
    if ((prod >> d) & 1u) prod ^= mod << (d - 23);
  return prod;
}

std::uint64_t polypowmod(std::uint64_t base, std::uint64_t e, std::uint64_t mod) {
  std::uint64_t result = 1, b = base;
  while (e) {
    if (e & 1u) result = polymulmod(result, b, mod);
    b = polymulmod(b, b, mod);
    e >>= 1;
  }
  return result;
}

}  // namespace

TEST(Crc24q, GoldenCheckValue) {
  const auto bits = ascii_bits("123456789");
  EXPECT_EQ(crc::compute(bits), 0xCDE703u);
  EXPECT_EQ(crc_longdiv(bits), 0xCDE703u);
}

TEST(Crc24q, MatchesLongDivisionOracle) {
  std::mt19937_64 rng(0xc24c24);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = rng() % 600;
    const auto bits = random_bits(rng, n);
    ASSERT_EQ(crc::compute(bits), crc_longdiv(bits)) << "len=" << n;
  }
}

TEST(Crc24q, ByteTableMatchesBitSerial) {
  std::mt19937_64 rng(0x5e11a1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto bits = random_bits(rng, rng() % 512);
    std::uint32_t serial = 0;
    for (auto b : bits) serial = crc::step_bit(serial, b);
    ASSERT_EQ(crc::compute(bits), serial);
  }
}

TEST(Crc24q, BytesPathAgreesWithBitsPath) {
  std::mt19937_64 rng(0xb17e5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::uint8_t> bytes(rng() % 64);
    for (auto& b : bytes) b = static_cast<std::uint8_t>(rng());
    std::vector<std::uint8_t> bits;
    for (auto b : bytes)
      for (int i = 7; i >= 0; --i) bits.push_back((b >> i) & 1u);
    ASSERT_EQ(crc::compute_bytes(bytes), crc::compute(bits));
  }
}

TEST(Crc24q, VerifyAcceptsCorrectCrc) {
  std::mt19937_64 rng(0xacce97);
  const auto body = random_bits(rng, crc::kProtectedBits);
  EXPECT_TRUE(crc::verify(body, crc::compute(body)));
  EXPECT_THROW(crc::verify(random_bits(rng, 100), 0), std::invalid_argument);
}

TEST(Crc24q, EverySingleBitErrorDetected) {
  std::mt19937_64 rng(0x51b817);
  auto body = random_bits(rng, crc::kProtectedBits);
  const std::uint32_t crc = crc::compute(body);
  for (std::size_t i = 0; i < body.size(); ++i) {
    body[i] ^= 1;
    EXPECT_FALSE(crc::verify(body, crc)) << "body bit " << i;
    body[i] ^= 1;
  }
  for (int i = 0; i < 24; ++i)
    EXPECT_FALSE(crc::verify(body, crc ^ (1u << i))) << "crc bit " << i;
}

TEST(Crc24q, DoubleBitErrorsDetected) {
  std::mt19937_64 rng(0xd0b1e);
  auto body = random_bits(rng, crc::kProtectedBits);
  const std::uint32_t crc = crc::compute(body);
  // all adjacent pairs, then random pairs
  for (std::size_t i = 0; i + 1 < body.size(); ++i) {
    body[i] ^= 1;
    body[i + 1] ^= 1;
    ASSERT_FALSE(crc::verify(body, crc)) << "adjacent pair at " << i;
    body[i] ^= 1;
    body[i + 1] ^= 1;
  }
  for (int trial = 0; trial < 2000; ++trial) {
    std::size_t i = rng() % body.size(), j = rng() % body.size();
    if (i == j) continue;
    body[i] ^= 1;
    body[j] ^= 1;
    ASSERT_FALSE(crc::verify(body, crc)) << i << "," << j;
    body[i] ^= 1;
    body[j] ^= 1;
  }
}

TEST(Crc24q, OddWeightErrorsDetected) {
  // The (x + 1) factor guarantees these.
  std::mt19937_64 rng(0x0dd);
  auto body = random_bits(rng, crc::kProtectedBits);
  const std::uint32_t crc = crc::compute(body);
  for (int trial = 0; trial < 1000; ++trial) {
    const int weight = 2 * static_cast<int>(rng() % 4) + 1;  // 1,3,5,7
    std::vector<std::size_t> flips;
    for (int k = 0; k < weight; ++k) flips.push_back(rng() % body.size());
    // re-draw collisions so parity of distinct flips stays odd
    std::sort(flips.begin(), flips.end());
    if (std::adjacent_find(flips.begin(), flips.end()) != flips.end()) continue;
    for (auto f : flips) body[f] ^= 1;
    ASSERT_FALSE(crc::verify(body, crc));
    for (auto f : flips) body[f] ^= 1;
  }
}

TEST(Crc24q, GeneratorFactorsAsXPlus1TimesPrimitive) {
  const std::uint64_t g = 0x1864CFBull;  // includes x^24
  auto [quotient, rem] = divide_by_x_plus_1(g, 24);
  EXPECT_EQ(rem, 0) << "g(x) must be divisible by (x + 1)";
  EXPECT_EQ(quotient, 0x823BA9ull);  // x^23 + x^17 + x^13 + x^12 + x^11 + x^9 + x^8 + x^7 + x^5 + x^3 + 1

  // Primitivity of the quotient: x has order 2^23 - 1 = 47 * 178481 modulo p.
  const std::uint64_t p = quotient;
  const std::uint64_t order = (1ull << 23) - 1;
  EXPECT_EQ(polypowmod(2, order, p), 1u);
  EXPECT_NE(polypowmod(2, order / 47, p), 1u);
  EXPECT_NE(polypowmod(2, order / 178481, p), 1u);
}
