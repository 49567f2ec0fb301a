#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

// Ranging codes: per-PRN Gold-style sequences built from two 13-stage
// Fibonacci LFSRs.  Each LFSR outputs stage 13; the feedback xor of the
// tapped stages enters stage 1.  The two outputs are xored, with the second
// sequence cyclically delayed by a per-PRN phase offset, giving one
// 8191-chip Gold period which is then repeated cyclically out to the
// 10230-chip code length (one code period per millisecond at 10.23 Mcps).
// Chip values map 0 -> +1, 1 -> -1.

namespace b2bsdr::prn {

inline constexpr int kStages = 13;
inline constexpr int kLfsrPeriod = 8191;  // 2^13 - 1, maximal sequences only
inline constexpr int kCodeLength = 10230;
inline constexpr double kChipRateHz = 10.23e6;
inline constexpr double kCodePeriodS = kCodeLength / kChipRateHz;  // 1 ms

struct LfsrSpec {
  std::vector<int> taps;             // stage numbers, 1..13
  std::uint16_t seed = 0x1fff;       // bit i-1 holds stage i

  std::uint16_t tap_mask() const {
    if (taps.empty()) throw std::invalid_argument("lfsr: no taps");
    std::uint16_t m = 0;
    for (int t : taps) {
      if (t < 1 || t > kStages) throw std::invalid_argument("lfsr: tap out of range");
      m |= static_cast<std::uint16_t>(1u << (t - 1));
    }
    return m;
  }
};

class Lfsr {
 public:
  explicit Lfsr(const LfsrSpec& spec) : mask_(spec.tap_mask()), state_(spec.seed & 0x1fff) {
    if (state_ == 0) throw std::invalid_argument("lfsr: all-zero seed");
  }

  int step() {
    const int out = (state_ >> (kStages - 1)) & 1;
    const int fb = std::popcount(static_cast<unsigned>(state_ & mask_)) & 1;
    state_ = static_cast<std::uint16_t>(((state_ << 1) | fb) & 0x1fff);
    return out;
  }

  std::uint16_t state() const { return state_; }

 private:
  std::uint16_t mask_;
  std::uint16_t state_;
};

inline std::vector<std::uint8_t> lfsr_sequence(const LfsrSpec& spec, std::size_t length) {
  Lfsr reg(spec);
  std::vector<std::uint8_t> out(length);
  for (auto& b : out) b = static_cast<std::uint8_t>(reg.step());
  return out;
}

// State-cycle length from the given seed; maximal taps give 8191.
inline std::size_t lfsr_period(const LfsrSpec& spec) {
  Lfsr reg(spec);
  const std::uint16_t start = reg.state();
  std::size_t n = 0;
  do {
    reg.step();
    ++n;
  } while (reg.state() != start && n <= (1u << kStages));
  return n;
}

struct CodeSpec {
  LfsrSpec g1, g2;
  int phase_offset = 0;  // chips of cyclic delay applied to g2
};

inline std::vector<std::int8_t> generate_chips(const CodeSpec& spec) {
  const auto u = lfsr_sequence(spec.g1, kLfsrPeriod);
  const auto v = lfsr_sequence(spec.g2, kLfsrPeriod);
  const int off = ((spec.phase_offset % kLfsrPeriod) + kLfsrPeriod) % kLfsrPeriod;
  std::vector<std::int8_t> chips(kCodeLength);
  for (int k = 0; k < kCodeLength; ++k) {
    const int g = k % kLfsrPeriod;
    const std::uint8_t bit = u[g] ^ v[(g + off) % kLfsrPeriod];
    chips[k] = bit ? -1 : +1;
  }
  return chips;
}

namespace detail {

inline std::string render_binary(std::uint16_t seed) {
  std::string s(kStages, '0');
  for (int i = 0; i < kStages; ++i)
    if ((seed >> i) & 1u) s[static_cast<std::size_t>(i)] = '1';  // leftmost char = stage 1
  return s;
}

inline std::uint16_t parse_binary(const std::string& s, int line_no) {
  if (s.size() != kStages) throw std::runtime_error("code table line " + std::to_string(line_no) + ": seed must be 13 binary digits");
  std::uint16_t v = 0;
  for (int i = 0; i < kStages; ++i) {
    const char c = s[static_cast<std::size_t>(i)];
    if (c != '0' && c != '1') throw std::runtime_error("code table line " + std::to_string(line_no) + ": bad seed digit");
    if (c == '1') v |= static_cast<std::uint16_t>(1u << i);
  }
  return v;
}

inline std::vector<int> parse_taps(const std::string& s, int line_no) {
  std::vector<int> taps;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      taps.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw std::runtime_error("code table line " + std::to_string(line_no) + ": bad tap list");
    }
  }
  if (taps.empty()) throw std::runtime_error("code table line " + std::to_string(line_no) + ": empty tap list");
  return taps;
}

inline std::string render_taps(const std::vector<int>& taps) {
  std::string s;
  for (std::size_t i = 0; i < taps.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(taps[i]);
  }
  return s;
}

}  // namespace detail

// Text table, one line per PRN:
//   prn taps1 seed1 taps2 seed2 phase_offset
// taps comma-separated stage numbers, seeds 13 binary digits with stage 1
// leftmost.  '#' starts a comment; blank lines are skipped.
class CodeTable {
 public:
  static CodeTable parse(const std::string& text) {
    CodeTable table;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::stringstream ls(line);
      int prn;
      if (!(ls >> prn)) continue;  // blank or comment-only
      std::string taps1, seed1, taps2, seed2;
      int offset;
      if (!(ls >> taps1 >> seed1 >> taps2 >> seed2 >> offset))
        throw std::runtime_error("code table line " + std::to_string(line_no) + ": expected 6 fields");
      std::string extra;
      if (ls >> extra) throw std::runtime_error("code table line " + std::to_string(line_no) + ": trailing fields");
      if (prn < 1 || prn > 63) throw std::runtime_error("code table line " + std::to_string(line_no) + ": prn out of range 1..63");
      CodeSpec spec;
      spec.g1.taps = detail::parse_taps(taps1, line_no);
      spec.g1.seed = detail::parse_binary(seed1, line_no);
      spec.g2.taps = detail::parse_taps(taps2, line_no);
      spec.g2.seed = detail::parse_binary(seed2, line_no);
      spec.phase_offset = offset;
      spec.g1.tap_mask();  // validate tap ranges now
      spec.g2.tap_mask();
      if (!table.specs_.emplace(prn, spec).second)
        throw std::runtime_error("code table line " + std::to_string(line_no) + ": duplicate prn " + std::to_string(prn));
    }
    if (table.specs_.empty()) throw std::runtime_error("code table: no entries");
    return table;
  }

  static CodeTable load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("code table: cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
  }

  std::string render() const {
    std::string out;
    for (const auto& [prn, spec] : specs_) {
      out += std::to_string(prn) + " " + detail::render_taps(spec.g1.taps) + " " + detail::render_binary(spec.g1.seed) +
             " " + detail::render_taps(spec.g2.taps) + " " + detail::render_binary(spec.g2.seed) + " " +
             std::to_string(spec.phase_offset) + "\n";
    }
    return out;
  }

  bool has(int prn) const { return specs_.count(prn) != 0; }
  const CodeSpec& at(int prn) const {
    auto it = specs_.find(prn);
    if (it == specs_.end()) throw std::out_of_range("code table: unknown prn " + std::to_string(prn));
    return it->second;
  }
  std::vector<int> prns() const {
    std::vector<int> p;
    for (const auto& [prn, spec] : specs_) p.push_back(prn);
    return p;
  }
  void insert(int prn, const CodeSpec& spec) { specs_[prn] = spec; }

 private:
  std::map<int, CodeSpec> specs_;
};

struct RangingCode {
  int prn = 0;
  std::vector<std::int8_t> chips;  // kCodeLength entries of +/-1
};

inline RangingCode generate_code(int prn, const CodeTable& table) {
  return RangingCode{prn, generate_chips(table.at(prn))};
}

// Bundled table for PRNs 59..68: maximal tap pairs with per-PRN phase
// offsets.  These codes are synthetic stand-ins with the documented length
// and structure, not any broadcast constellation's assignment.
inline const char* kSyntheticCodeTableText =
    "# prn taps1 seed1 taps2 seed2 phase_offset\n"
    "10 13,12,10,9 1111111111111 13,12,11,1 1111111111111 541\n"
    "20 13,12,10,9 1111111111111 13,12,11,1 1111111111111 1082\n"
    "30 13,12,10,9 1111111111111 13,12,11,1 1111111111111 1623\n"
    "40 13,12,10,9 1111111111111 13,12,11,1 1111111111111 2164\n"
    "50 13,12,11,2 1111111111111 13,11,8,4 1111111111111 709\n"
    "59 13,4,3,1 1111111111111 13,12,11,8 1111111111111 377\n"
    "60 13,4,3,1 1111111111111 13,12,11,8 1111111111111 754\n"
    "61 13,4,3,1 1111111111111 13,12,11,8 1111111111111 1131\n"
    "62 13,4,3,1 1111111111111 13,12,11,8 1111111111111 1508\n"
    "63 13,4,3,1 1111111111111 13,12,11,8 1111111111111 1885\n";

inline const CodeTable& synthetic_table() {
  static const CodeTable table = CodeTable::parse(kSyntheticCodeTableText);
  return table;
}

}  // namespace b2bsdr::prn
