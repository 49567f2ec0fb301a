#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

// Frame structure at 1000 symbols per second:
//   16 preamble + 6 prn + 6 reserved + 972 coded symbols = 1000 per frame.
// The preamble is 0xEB90 sent MSB-first.  Symbols carry bit 0 as +1 and
// bit 1 as -1; a tracking channel that locked half a cycle off hands over
// the whole stream negated, so every preamble hit carries a polarity and
// downstream fields are corrected accordingly.

namespace b2bsdr::framing {

inline constexpr std::uint16_t kPreamble = 0xEB90;
inline constexpr int kPreambleBits = 16;
inline constexpr int kPrnBits = 6;
inline constexpr int kReservedBits = 6;
inline constexpr int kFrameSymbols = 1000;
inline constexpr int kCodeSymbols = 972;
inline constexpr int kHeaderSymbols = kPreambleBits + kPrnBits + kReservedBits;  // 28

enum class Polarity { normal, inverted };

struct PreambleHit {
  std::size_t position = 0;
  Polarity polarity = Polarity::normal;
};

// Hard-decision sliding correlation; only the two exact matches (+16/-16)
// count as hits.
inline std::vector<PreambleHit> find_preambles(std::span<const float> symbols) {
  std::vector<PreambleHit> hits;
  if (symbols.size() < static_cast<std::size_t>(kPreambleBits)) return hits;
  std::array<int, kPreambleBits> pattern;  // +1 where the preamble bit is 0
  for (int i = 0; i < kPreambleBits; ++i)
    pattern[static_cast<std::size_t>(i)] = ((kPreamble >> (kPreambleBits - 1 - i)) & 1u) ? -1 : +1;
  for (std::size_t p = 0; p + kPreambleBits <= symbols.size(); ++p) {
    int corr = 0;
    for (int i = 0; i < kPreambleBits; ++i) {
      const int sign = symbols[p + static_cast<std::size_t>(i)] < 0.f ? -1 : +1;
      corr += sign * pattern[static_cast<std::size_t>(i)];
    }
    if (corr == kPreambleBits) hits.push_back(PreambleHit{p, Polarity::normal});
    else if (corr == -kPreambleBits) hits.push_back(PreambleHit{p, Polarity::inverted});
  }
  return hits;
}

// Raw 6-bit field starting at `pos`, polarity-corrected.
inline int read_field(std::span<const float> symbols, std::size_t pos, int nbits, Polarity pol) {
  int v = 0;
  for (int i = 0; i < nbits; ++i) {
    int bit = symbols[pos + static_cast<std::size_t>(i)] < 0.f ? 1 : 0;
    if (pol == Polarity::inverted) bit ^= 1;
    v = (v << 1) | bit;
  }
  return v;
}

struct ConfirmedStart {
  std::size_t position = 0;
  Polarity polarity = Polarity::normal;
};

struct ConfirmResult {
  std::vector<ConfirmedStart> starts;
  int rejected_no_partner = 0;    // no same-polarity hit exactly one frame away
  int rejected_prn_field = 0;     // partner found but prn field check failed
};

// A hit is confirmed by a same-polarity hit exactly 1000 symbols before or
// after it, and by its prn field: the field must read `source_prn` after
// polarity correction, which for an inverted frame means the raw bits sum
// with source_prn to 63.
inline ConfirmResult confirm_frame_starts(std::span<const float> symbols, const std::vector<PreambleHit>& hits,
                                          int source_prn) {
  if (source_prn < 0 || source_prn > 63) throw std::invalid_argument("framing: source prn out of range");
  ConfirmResult result;
  for (std::size_t k = 0; k < hits.size(); ++k) {
    const auto& h = hits[k];
    bool partner = false;
    for (std::size_t m = k + 1; m < hits.size() && hits[m].position <= h.position + kFrameSymbols; ++m)
      if (hits[m].position == h.position + kFrameSymbols && hits[m].polarity == h.polarity) partner = true;
    for (std::size_t m = k; m-- > 0 && !partner;)
      if (hits[m].position + kFrameSymbols == h.position && hits[m].polarity == h.polarity) partner = true;
    if (!partner) {
      ++result.rejected_no_partner;
      continue;
    }
    if (h.position + kPreambleBits + kPrnBits <= symbols.size()) {
      const int field = read_field(symbols, h.position + kPreambleBits, kPrnBits, h.polarity);
      if (field != source_prn) {
        ++result.rejected_prn_field;
        continue;
      }
    }
    result.starts.push_back(ConfirmedStart{h.position, h.polarity});
  }
  return result;
}

struct Frame {
  std::size_t start = 0;
  Polarity polarity = Polarity::normal;
  int prn_field = 0;    // polarity-corrected
  int reserved = 0;     // polarity-corrected
  std::array<float, kCodeSymbols> code_soft{};  // polarity-corrected soft symbols
};

inline Frame extract_frame(std::span<const float> symbols, const ConfirmedStart& start) {
  if (start.position + kFrameSymbols > symbols.size())
    throw std::out_of_range("framing: frame extends past end of stream");
  Frame f;
  f.start = start.position;
  f.polarity = start.polarity;
  f.prn_field = read_field(symbols, start.position + kPreambleBits, kPrnBits, start.polarity);
  f.reserved = read_field(symbols, start.position + kPreambleBits + kPrnBits, kReservedBits, start.polarity);
  const float flip = start.polarity == Polarity::inverted ? -1.f : 1.f;
  for (int i = 0; i < kCodeSymbols; ++i)
    f.code_soft[static_cast<std::size_t>(i)] = flip * symbols[start.position + static_cast<std::size_t>(kHeaderSymbols + i)];
  return f;
}

// Symbol stream for one frame: header bits then coded bits, 0 -> +1, 1 -> -1.
inline std::vector<std::int8_t> frame_symbols(int source_prn, int reserved, std::span<const std::uint8_t> code_bits) {
  if (source_prn < 0 || source_prn > 63) throw std::invalid_argument("framing: source prn out of range");
  if (reserved < 0 || reserved > 63) throw std::invalid_argument("framing: reserved field out of range");
  if (code_bits.size() != static_cast<std::size_t>(kCodeSymbols)) throw std::invalid_argument("framing: expected 972 coded bits");
  std::vector<std::int8_t> out;
  out.reserve(kFrameSymbols);
  for (int i = 0; i < kPreambleBits; ++i) out.push_back(((kPreamble >> (kPreambleBits - 1 - i)) & 1u) ? -1 : +1);
  for (int i = kPrnBits - 1; i >= 0; --i) out.push_back(((source_prn >> i) & 1) ? -1 : +1);
  for (int i = kReservedBits - 1; i >= 0; --i) out.push_back(((reserved >> i) & 1) ? -1 : +1);
  for (auto b : code_bits) out.push_back(b ? -1 : +1);
  return out;
}

}  // namespace b2bsdr::framing
