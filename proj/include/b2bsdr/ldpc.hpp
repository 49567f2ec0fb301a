#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "b2bsdr/gf64.hpp"

// 64-ary LDPC(162, 81) over GF(2^6).  A frame's 972 coded bits are 162
// six-bit symbols; 81 are information, 81 parity.  The parity-check matrix
// H (81 x 162) is sparse with entries in GF(64)*.  Encoding is systematic:
// H = [A | B] with B square over the parity columns, X = B^-1 A, and the
// parity symbols are p = X m.  Decoding is extended min-sum on the full
// 64-entry reliability vectors.

namespace b2bsdr::ldpc {

using gf64::Elem;

inline constexpr int kChecks = 81;
inline constexpr int kSymbols = 162;
inline constexpr int kInfoSymbols = 81;
inline constexpr int kCodeBits = kSymbols * gf64::kSymbolBits;  // 972
inline constexpr int kDefaultItrMax = 10;

struct Entry {
  int row = 0, col = 0;
  Elem elem = 0;
};

class ParityCheckMatrix {
 public:
  struct Edge {
    int var = 0;                     // column index
    Elem h = 0;                      // H entry on this edge
    std::array<Elem, 64> mul_h{};    // mul_h[a] = h * a, used by the decoder
  };

  static ParityCheckMatrix from_entries(const std::vector<Entry>& entries) {
    ParityCheckMatrix m;
    std::vector<std::vector<bool>> seen(kChecks, std::vector<bool>(kSymbols, false));
    for (const auto& e : entries) {
      if (e.row < 0 || e.row >= kChecks) throw std::runtime_error("ldpc: row index out of range");
      if (e.col < 0 || e.col >= kSymbols) throw std::runtime_error("ldpc: column index out of range");
      if (e.elem == 0 || e.elem > 63) throw std::runtime_error("ldpc: entry must be a nonzero field element");
      if (seen[static_cast<std::size_t>(e.row)][static_cast<std::size_t>(e.col)])
        throw std::runtime_error("ldpc: duplicate entry at row " + std::to_string(e.row) + " col " + std::to_string(e.col));
      seen[static_cast<std::size_t>(e.row)][static_cast<std::size_t>(e.col)] = true;
    }
    m.entries_ = entries;
    std::sort(m.entries_.begin(), m.entries_.end(),
              [](const Entry& a, const Entry& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
    for (const auto& e : m.entries_) {
      Edge edge;
      edge.var = e.col;
      edge.h = e.elem;
      for (int a = 0; a < 64; ++a) edge.mul_h[static_cast<std::size_t>(a)] = gf64::mul(e.elem, static_cast<Elem>(a));
      m.check_edges_[static_cast<std::size_t>(e.row)].push_back(static_cast<int>(m.edges_.size()));
      m.var_edges_[static_cast<std::size_t>(e.col)].push_back(static_cast<int>(m.edges_.size()));
      m.edges_.push_back(edge);
    }
    for (const auto& row : m.check_edges_)
      if (row.size() < 2) throw std::runtime_error("ldpc: check row with fewer than two entries");
    return m;
  }

  // Text format: header "ldpc-h 81 162", then one "row col element" line per
  // nonzero entry, all decimal and 0-based.  '#' comments allowed.
  static ParityCheckMatrix parse(const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    bool header_seen = false;
    std::vector<Entry> entries;
    int line_no = 0;
    while (std::getline(ss, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::stringstream ls(line);
      if (!header_seen) {
        std::string tag;
        if (!(ls >> tag)) continue;
        int rows, cols;
        if (tag != "ldpc-h" || !(ls >> rows >> cols))
          throw std::runtime_error("ldpc: line " + std::to_string(line_no) + ": expected header 'ldpc-h 81 162'");
        if (rows != kChecks || cols != kSymbols)
          throw std::runtime_error("ldpc: unsupported dimensions " + std::to_string(rows) + "x" + std::to_string(cols));
        header_seen = true;
        continue;
      }
      int row, col, elem;
      if (!(ls >> row)) continue;
      if (!(ls >> col >> elem)) throw std::runtime_error("ldpc: line " + std::to_string(line_no) + ": expected 'row col element'");
      entries.push_back(Entry{row, col, static_cast<Elem>(elem)});
      if (elem < 1 || elem > 63) throw std::runtime_error("ldpc: line " + std::to_string(line_no) + ": element out of range 1..63");
    }
    if (!header_seen) throw std::runtime_error("ldpc: missing header");
    return from_entries(entries);
  }

  static ParityCheckMatrix load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("ldpc: cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
  }

  // Alternate loader: one line per check row in each text, the first giving
  // the column indices and the second the matching field elements.
  static ParityCheckMatrix from_index_element(const std::string& index_text, const std::string& element_text) {
    auto parse_rows = [](const std::string& text) {
      std::vector<std::vector<int>> rows;
      std::stringstream ss(text);
      std::string line;
      while (std::getline(ss, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::stringstream ls(line);
        std::vector<int> vals;
        int v;
        while (ls >> v) vals.push_back(v);
        if (!vals.empty()) rows.push_back(vals);
      }
      return rows;
    };
    const auto idx = parse_rows(index_text);
    const auto ele = parse_rows(element_text);
    if (idx.size() != kChecks || ele.size() != kChecks)
      throw std::runtime_error("ldpc: index/element texts must both have 81 rows");
    std::vector<Entry> entries;
    for (int r = 0; r < kChecks; ++r) {
      if (idx[static_cast<std::size_t>(r)].size() != ele[static_cast<std::size_t>(r)].size())
        throw std::runtime_error("ldpc: row " + std::to_string(r) + ": index/element count mismatch");
      for (std::size_t k = 0; k < idx[static_cast<std::size_t>(r)].size(); ++k)
        entries.push_back(Entry{r, idx[static_cast<std::size_t>(r)][k], static_cast<Elem>(ele[static_cast<std::size_t>(r)][k])});
    }
    return from_entries(entries);
  }

  std::string render() const {
    std::string out = "ldpc-h 81 162\n";
    for (const auto& e : entries_)
      out += std::to_string(e.row) + " " + std::to_string(e.col) + " " + std::to_string(static_cast<int>(e.elem)) + "\n";
    return out;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& check(int i) const { return check_edges_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& var(int j) const { return var_edges_[static_cast<std::size_t>(j)]; }

 private:
  ParityCheckMatrix() = default;
  std::vector<Entry> entries_;
  std::vector<Edge> edges_;
  std::array<std::vector<int>, kChecks> check_edges_;
  std::array<std::vector<int>, kSymbols> var_edges_;
};

inline std::array<Elem, kChecks> syndrome(std::span<const Elem> codeword, const ParityCheckMatrix& H) {
  if (codeword.size() != kSymbols) throw std::invalid_argument("ldpc: codeword must have 162 symbols");
  std::array<Elem, kChecks> s{};
  for (int i = 0; i < kChecks; ++i) {
    Elem acc = 0;
    for (int ei : H.check(i)) {
      const auto& e = H.edges()[static_cast<std::size_t>(ei)];
      acc = gf64::add(acc, e.mul_h[codeword[static_cast<std::size_t>(e.var)]]);
    }
    s[static_cast<std::size_t>(i)] = acc;
  }
  return s;
}

inline bool syndrome_is_zero(const std::array<Elem, kChecks>& s) {
  return std::all_of(s.begin(), s.end(), [](Elem v) { return v == 0; });
}

// Systematic generator: codeword = [message | X * message].
class GeneratorMatrix {
 public:
  static GeneratorMatrix derive(const ParityCheckMatrix& H) {
    // Dense [B | A]; row-reduce B to the identity, A becomes X = B^-1 A.
    std::vector<std::array<Elem, kSymbols>> rows(kChecks);
    for (auto& r : rows) r.fill(0);
    for (const auto& e : H.entries()) {
      const int col = e.col < kInfoSymbols ? kChecks + e.col : e.col - kInfoSymbols;
      rows[static_cast<std::size_t>(e.row)][static_cast<std::size_t>(col)] = e.elem;
    }
    for (int c = 0; c < kChecks; ++c) {
      int pivot = -1;
      for (int r = c; r < kChecks; ++r)
        if (rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] != 0) {
          pivot = r;
          break;
        }
      if (pivot < 0) throw std::runtime_error("ldpc: parity section is singular, no systematic generator");
      std::swap(rows[static_cast<std::size_t>(c)], rows[static_cast<std::size_t>(pivot)]);
      const Elem diag_inv = gf64::inv(rows[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)]);
      for (int k = 0; k < kSymbols; ++k)
        rows[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)] =
            gf64::mul(diag_inv, rows[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)]);
      for (int r = 0; r < kChecks; ++r) {
        if (r == c) continue;
        const Elem f = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        if (f == 0) continue;
        for (int k = 0; k < kSymbols; ++k)
          rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] = gf64::add(
              rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)],
              gf64::mul(f, rows[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)]));
      }
    }
    GeneratorMatrix g;
    for (int j = 0; j < kChecks; ++j)
      for (int i = 0; i < kInfoSymbols; ++i)
        g.x_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
            rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(kChecks + i)];
    return g;
  }

  std::array<Elem, kSymbols> encode(std::span<const Elem> message) const {
    if (message.size() != kInfoSymbols) throw std::invalid_argument("ldpc: message must have 81 symbols");
    std::array<Elem, kSymbols> cw{};
    std::copy(message.begin(), message.end(), cw.begin());
    for (int j = 0; j < kChecks; ++j) {
      Elem acc = 0;
      for (int i = 0; i < kInfoSymbols; ++i)
        acc = gf64::add(acc, gf64::mul(x_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)], message[static_cast<std::size_t>(i)]));
      cw[static_cast<std::size_t>(kInfoSymbols + j)] = acc;
    }
    return cw;
  }

  Elem x(int j, int i) const { return x_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]; }

 private:
  std::array<std::array<Elem, kInfoSymbols>, kChecks> x_{};
};

inline std::vector<Elem> bits_to_symbols(std::span<const std::uint8_t> bits) {
  if (bits.size() % gf64::kSymbolBits != 0) throw std::invalid_argument("ldpc: bit count not a multiple of 6");
  std::vector<Elem> out(bits.size() / gf64::kSymbolBits);
  for (std::size_t s = 0; s < out.size(); ++s)
    out[s] = gf64::symbol_from_bits([&](int i) { return static_cast<int>(bits[s * 6 + static_cast<std::size_t>(i)]); });
  return out;
}

inline std::vector<std::uint8_t> symbols_to_bits(std::span<const Elem> symbols) {
  std::vector<std::uint8_t> out(symbols.size() * gf64::kSymbolBits);
  for (std::size_t s = 0; s < symbols.size(); ++s)
    for (int i = 0; i < gf64::kSymbolBits; ++i)
      out[s * 6 + static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(gf64::bit_of(symbols[s], i));
  return out;
}

// Per-symbol reliabilities in cost form: cost[j][a] >= 0, zero at the most
// plausible symbol, larger meaning less plausible.
struct ReceivedSequence {
  std::vector<std::array<float, 64>> cost;  // kSymbols entries
};

// Soft coded bits, 6 per symbol in transmission order; positive favors bit 0.
inline ReceivedSequence received_from_soft_bits(std::span<const float> soft) {
  if (soft.size() != static_cast<std::size_t>(kCodeBits)) throw std::invalid_argument("ldpc: expected 972 soft bits");
  ReceivedSequence y;
  y.cost.resize(kSymbols);
  for (int s = 0; s < kSymbols; ++s) {
    std::array<float, 6> mag;
    std::array<int, 6> hard;
    for (int i = 0; i < 6; ++i) {
      const float l = soft[static_cast<std::size_t>(s * 6 + i)];
      hard[static_cast<std::size_t>(i)] = l < 0.f ? 1 : 0;
      mag[static_cast<std::size_t>(i)] = std::fabs(l);
    }
    for (int a = 0; a < 64; ++a) {
      float c = 0.f;
      for (int i = 0; i < 6; ++i)
        if (gf64::bit_of(static_cast<Elem>(a), i) != hard[static_cast<std::size_t>(i)]) c += mag[static_cast<std::size_t>(i)];
      y.cost[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)] = c;
    }
  }
  return y;
}

inline ReceivedSequence received_noiseless(std::span<const Elem> codeword, float confidence = 1.f) {
  if (codeword.size() != kSymbols) throw std::invalid_argument("ldpc: codeword must have 162 symbols");
  std::vector<float> soft(kCodeBits);
  const auto bits = symbols_to_bits(codeword);
  for (int i = 0; i < kCodeBits; ++i) soft[static_cast<std::size_t>(i)] = bits[static_cast<std::size_t>(i)] ? -confidence : confidence;
  return received_from_soft_bits(soft);
}

struct DecodeResult {
  std::array<Elem, kInfoSymbols> message{};
  std::array<Elem, kSymbols> codeword{};
  int iterations = 0;
  bool converged = false;
};

namespace detail {

// (min,+) convolution over the xor group: out[t] = min over a^b=t of u[a]+v[b].
inline void min_conv(const float* u, const float* v, float* out) {
  std::fill(out, out + 64, std::numeric_limits<float>::infinity());
  for (int a = 0; a < 64; ++a) {
    const float ua = u[a];
    const float* vb = v;
    for (int b = 0; b < 64; ++b) {
      const float c = ua + vb[b];
      float& slot = out[a ^ b];
      if (c < slot) slot = c;
    }
  }
}

inline void normalize_min(float* m) {
  float lo = m[0];
  for (int a = 1; a < 64; ++a) lo = std::min(lo, m[a]);
  for (int a = 0; a < 64; ++a) m[a] -= lo;
}

}  // namespace detail

// Extended min-sum.  One iteration is a hard decision plus syndrome test;
// an error-free frame therefore reports convergence at iteration 1, before
// any message passing.
inline DecodeResult decode(const ReceivedSequence& y, const ParityCheckMatrix& H, int itr_max = kDefaultItrMax) {
  if (y.cost.size() != static_cast<std::size_t>(kSymbols)) throw std::invalid_argument("ldpc: received sequence must have 162 symbols");
  if (itr_max < 1) throw std::invalid_argument("ldpc: itr_max must be at least 1");

  const auto& edges = H.edges();
  const std::size_t ne = edges.size();
  std::vector<std::array<float, 64>> c2v(ne), v2c(ne);
  for (auto& m : c2v) m.fill(0.f);

  DecodeResult result;
  std::array<Elem, kSymbols> hard{};
  std::vector<std::array<float, 64>> scratch;

  for (int itr = 1; itr <= itr_max; ++itr) {
    // Totals and hard decision.
    for (int j = 0; j < kSymbols; ++j) {
      std::array<float, 64> total = y.cost[static_cast<std::size_t>(j)];
      for (int ei : H.var(j))
        for (int a = 0; a < 64; ++a) total[static_cast<std::size_t>(a)] += c2v[static_cast<std::size_t>(ei)][static_cast<std::size_t>(a)];
      int best = 0;
      for (int a = 1; a < 64; ++a)
        if (total[static_cast<std::size_t>(a)] < total[static_cast<std::size_t>(best)]) best = a;
      hard[static_cast<std::size_t>(j)] = static_cast<Elem>(best);
      // Variable-to-check for the round ahead: leave-one-out totals.
      for (int ei : H.var(j)) {
        auto& msg = v2c[static_cast<std::size_t>(ei)];
        for (int a = 0; a < 64; ++a)
          msg[static_cast<std::size_t>(a)] = total[static_cast<std::size_t>(a)] - c2v[static_cast<std::size_t>(ei)][static_cast<std::size_t>(a)];
        detail::normalize_min(msg.data());
      }
    }

    result.iterations = itr;
    if (syndrome_is_zero(syndrome(hard, H))) {
      result.converged = true;
      break;
    }
    if (itr == itr_max) break;

    // Check-node update: (min,+) convolution of the incoming messages,
    // computed with forward/backward partial products, in the domain
    // t = h * a so the constraint is a plain xor.
    for (int i = 0; i < kChecks; ++i) {
      const auto& ce = H.check(i);
      const int d = static_cast<int>(ce.size());
      if (static_cast<int>(scratch.size()) < 3 * d) scratch.resize(static_cast<std::size_t>(3 * d));
      auto* u = scratch.data();           // d transformed inputs
      auto* fwd = scratch.data() + d;     // forward partial products
      auto* bwd = scratch.data() + 2 * d; // backward partial products
      for (int k = 0; k < d; ++k) {
        const auto& e = edges[static_cast<std::size_t>(ce[static_cast<std::size_t>(k)])];
        const auto& msg = v2c[static_cast<std::size_t>(ce[static_cast<std::size_t>(k)])];
        for (int a = 0; a < 64; ++a) u[k][e.mul_h[static_cast<std::size_t>(a)]] = msg[static_cast<std::size_t>(a)];
      }
      fwd[0] = u[0];
      for (int k = 1; k < d; ++k) detail::min_conv(fwd[k - 1].data(), u[k].data(), fwd[k].data());
      bwd[d - 1] = u[d - 1];
      for (int k = d - 2; k >= 0; --k) detail::min_conv(u[k].data(), bwd[k + 1].data(), bwd[k].data());
      for (int k = 0; k < d; ++k) {
        std::array<float, 64> w;
        if (k == 0) w = bwd[1];
        else if (k == d - 1) w = fwd[d - 2];
        else detail::min_conv(fwd[k - 1].data(), bwd[k + 1].data(), w.data());
        const auto& e = edges[static_cast<std::size_t>(ce[static_cast<std::size_t>(k)])];
        auto& out = c2v[static_cast<std::size_t>(ce[static_cast<std::size_t>(k)])];
        for (int a = 0; a < 64; ++a) out[static_cast<std::size_t>(a)] = w[e.mul_h[static_cast<std::size_t>(a)]];
        detail::normalize_min(out.data());
      }
    }
  }

  result.codeword = hard;
  std::copy(hard.begin(), hard.begin() + kInfoSymbols, result.message.begin());
  if (result.converged && !syndrome_is_zero(syndrome(result.codeword, H)))
    throw std::logic_error("ldpc: convergence reported with nonzero syndrome");
  return result;
}

// Deterministic companion matrix, column weight 3.  Parity column 81+j
// keeps one entry on row j so the parity section carries a full diagonal;
// the other entries land on distinct random rows.  Draws continue from one
// generator until the parity section comes out invertible and every row has
// weight >= 2, so a given seed always yields the same H.
inline ParityCheckMatrix make_synthetic(std::uint32_t seed) {
  std::mt19937 rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(kSymbols) * 3);
    for (int col = 0; col < kSymbols; ++col) {
      int r[3];
      if (col >= kInfoSymbols) r[0] = col - kInfoSymbols;
      else r[0] = static_cast<int>(rng() % kChecks);
      do { r[1] = static_cast<int>(rng() % kChecks); } while (r[1] == r[0]);
      do { r[2] = static_cast<int>(rng() % kChecks); } while (r[2] == r[0] || r[2] == r[1]);
      for (int k = 0; k < 3; ++k)
        entries.push_back(Entry{r[k], col, static_cast<Elem>(1 + rng() % 63)});
    }
    try {
      auto H = ParityCheckMatrix::from_entries(entries);
      GeneratorMatrix::derive(H);  // parity section must be invertible
      return H;
    } catch (const std::runtime_error&) {
      continue;
    }
  }
  throw std::runtime_error("ldpc: synthetic construction failed");
}

inline constexpr std::uint32_t kSyntheticSeed = 20250814;

inline const ParityCheckMatrix& synthetic_h() {
  static const ParityCheckMatrix H = make_synthetic(kSyntheticSeed);
  return H;
}

}  // namespace b2bsdr::ldpc
