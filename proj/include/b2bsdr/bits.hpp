#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace b2bsdr {

// One bit per byte, value 0 or 1.  All multi-bit fields in this codebase are
// MSB-first: the first bit of a field is its highest-order bit.
using BitVec = std::vector<std::uint8_t>;

inline void append_uint(BitVec& bits, std::uint64_t value, int width) {
  if (width < 0 || width > 64) throw std::invalid_argument("append_uint: bad width");
  for (int i = width - 1; i >= 0; --i) bits.push_back(static_cast<std::uint8_t>((value >> i) & 1u));
}

inline std::uint64_t read_uint(std::span<const std::uint8_t> bits, std::size_t pos, int width) {
  if (width < 0 || width > 64) throw std::invalid_argument("read_uint: bad width");
  if (pos + static_cast<std::size_t>(width) > bits.size()) throw std::out_of_range("read_uint: past end");
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v = (v << 1) | (bits[pos + i] & 1u);
  return v;
}

// Two's-complement decode of a width-bit field.
inline std::int64_t to_signed(std::uint64_t raw, int width) {
  if (width <= 0 || width > 63) throw std::invalid_argument("to_signed: bad width");
  const std::uint64_t sign = 1ull << (width - 1);
  return (raw & sign) ? static_cast<std::int64_t>(raw) - (1ll << width) : static_cast<std::int64_t>(raw);
}

inline std::uint64_t from_signed(std::int64_t value, int width) {
  if (width <= 0 || width > 63) throw std::invalid_argument("from_signed: bad width");
  const std::int64_t lo = -(1ll << (width - 1)), hi = (1ll << (width - 1)) - 1;
  if (value < lo || value > hi) throw std::range_error("from_signed: value does not fit field");
  return static_cast<std::uint64_t>(value) & ((width == 64) ? ~0ull : ((1ull << width) - 1));
}

// Sequential readers/writers keep field offsets honest when walking a payload.
class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bits) : bits_(bits) {}
  std::uint64_t take(int width) {
    std::uint64_t v = read_uint(bits_, pos_, width);
    pos_ += static_cast<std::size_t>(width);
    return v;
  }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bits_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bits_;
  std::size_t pos_ = 0;
};

class BitWriter {
 public:
  explicit BitWriter(BitVec& out) : out_(out) {}
  void put(std::uint64_t value, int width) { append_uint(out_, value, width); }

 private:
  BitVec& out_;
};

inline std::string to_hex(std::span<const std::uint8_t> bits) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve((bits.size() + 3) / 4);
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    unsigned nib = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      nib <<= 1;
      if (i + j < bits.size()) nib |= bits[i + j] & 1u;
    }
    s.push_back(digits[nib]);
  }
  return s;
}

inline BitVec from_hex(const std::string& hex, std::size_t nbits) {
  if (hex.size() * 4 < nbits) throw std::invalid_argument("from_hex: string too short");
  BitVec bits;
  bits.reserve(nbits);
  for (std::size_t i = 0; i < nbits; ++i) {
    char c = hex[i / 4];
    unsigned nib;
    if (c >= '0' && c <= '9') nib = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f') nib = static_cast<unsigned>(c - 'a') + 10;
    else if (c >= 'A' && c <= 'F') nib = static_cast<unsigned>(c - 'A') + 10;
    else throw std::invalid_argument("from_hex: bad digit");
    bits.push_back(static_cast<std::uint8_t>((nib >> (3 - i % 4)) & 1u));
  }
  return bits;
}

}  // namespace b2bsdr
