#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

// GF(2^6) built on the primitive polynomial p(x) = 1 + x + x^6.
//
// An element is a 6-bit value whose bit i is the coefficient of x^i, so
// 0x01 is the multiplicative identity and 0x02 (that is, x) is a generator
// of the 63-element multiplicative group.  Over the air a symbol's first
// transmitted bit is its x^5 coefficient.

namespace b2bsdr::gf64 {

using Elem = std::uint8_t;

inline constexpr int kFieldSize = 64;
inline constexpr int kGroupOrder = 63;
inline constexpr int kSymbolBits = 6;
inline constexpr Elem kGenerator = 0x02;

namespace detail {

// Multiply by x; x^6 folds back to x + 1.
constexpr Elem xtime(Elem v) {
  Elem shifted = static_cast<Elem>((v << 1) & 0x3f);
  return (v & 0x20) ? static_cast<Elem>(shifted ^ 0x03) : shifted;
}

struct Tables {
  // exp holds alpha^0..alpha^125 so mul can index log[a]+log[b] directly.
  std::array<Elem, 2 * kGroupOrder> exp{};
  std::array<std::uint8_t, kFieldSize> log{};
};

constexpr Tables make_tables() {
  Tables t{};
  Elem v = 1;
  for (int i = 0; i < kGroupOrder; ++i) {
    t.exp[i] = v;
    t.exp[i + kGroupOrder] = v;
    t.log[v] = static_cast<std::uint8_t>(i);
    v = xtime(v);
  }
  t.log[0] = 0xff;  // sentinel, never a valid exponent
  return t;
}

inline constexpr Tables tables = make_tables();

}  // namespace detail

constexpr Elem add(Elem a, Elem b) { return static_cast<Elem>(a ^ b); }

constexpr Elem mul(Elem a, Elem b) {
  if (a == 0 || b == 0) return 0;
  return detail::tables.exp[detail::tables.log[a] + detail::tables.log[b]];
}

inline Elem inv(Elem a) {
  if (a == 0) throw std::domain_error("gf64: inverse of zero");
  return detail::tables.exp[kGroupOrder - detail::tables.log[a]];
}

inline Elem div(Elem a, Elem b) { return mul(a, inv(b)); }

constexpr Elem pow_generator(int e) {
  int r = e % kGroupOrder;
  if (r < 0) r += kGroupOrder;
  return detail::tables.exp[r];
}

// Transmission-order bit i (i = 0 first on air) of a symbol.
constexpr int bit_of(Elem a, int i) { return (a >> (kSymbolBits - 1 - i)) & 1; }

// Inverse of bit_of: assemble a symbol from its transmission-order bits.
template <typename BitAt>
constexpr Elem symbol_from_bits(BitAt&& bit_at) {
  Elem a = 0;
  for (int i = 0; i < kSymbolBits; ++i) a = static_cast<Elem>((a << 1) | (bit_at(i) & 1));
  return a;
}

}  // namespace b2bsdr::gf64
