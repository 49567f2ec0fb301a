#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "b2bsdr/crc24q.hpp"
#include "b2bsdr/schema.hpp"

// Typed views of the five live message types.
//   1  satellite mask + issue-of-data for the correction group
//   2  orbit corrections (radial/along/cross + URA index)
//   3  differential code biases per signal mode
//   4  clock corrections (c0)
//   63 null
// Types 5-7 are recognized but carry no implemented payload; 0 and 8-62 are
// reserved.  All layouts come from the loaded schema; empty satellite slots
// carry prn 0.

namespace b2bsdr::msg {

enum class System { bds3, gps };

inline const char* system_name(System s) { return s == System::bds3 ? "BDS3" : "GPS"; }

inline System system_from_code(std::int64_t code) {
  if (code == 0) return System::bds3;
  if (code == 1) return System::gps;
  throw std::runtime_error("pppmsg: unknown system code " + std::to_string(code));
}

inline std::int64_t system_code(System s) { return s == System::bds3 ? 0 : 1; }

// Signal modes seen in service for code biases; anything else still parses
// but the store flags it.
inline const std::vector<int>& known_bias_modes() {
  static const std::vector<int> modes{0, 1, 2, 4, 5, 7, 8, 12};
  return modes;
}

struct MaskContent {
  long epoch = 0;
  int iod = 0;
  std::vector<int> bds3;  // prns, ascending
  std::vector<int> gps;
};

struct OrbitEntry {
  System system = System::bds3;
  int prn = 0;
  bool available = true;
  double radial = 0, along = 0, cross = 0;
  int ura = 0;
};

struct OrbitContent {
  long epoch = 0;
  int iod = 0;
  std::vector<OrbitEntry> sats;
};

struct BiasMode {
  int mode = 0;
  double bias = 0;
  bool operator==(const BiasMode&) const = default;
};

struct BiasEntry {
  System system = System::bds3;
  int prn = 0;
  std::vector<BiasMode> modes;
};

struct BiasContent {
  long epoch = 0;
  std::vector<BiasEntry> sats;
};

struct ClockEntry {
  System system = System::bds3;
  int prn = 0;
  bool available = true;
  double c0 = 0;
};

struct ClockContent {
  long epoch = 0;
  int iod = 0;
  std::vector<ClockEntry> sats;
};

namespace detail {

inline std::string slot(int k, const char* suffix) { return "sat" + std::to_string(k) + "_" + std::string(suffix); }

inline int count_slots(const TypeSchema& ts) {
  int k = 1;
  while (ts.has(slot(k, "prn"))) ++k;
  return k - 1;
}

inline int count_mode_slots(const TypeSchema& ts, int sat_slot) {
  int j = 1;
  while (ts.has(slot(sat_slot, ("mode" + std::to_string(j)).c_str()))) ++j;
  return j - 1;
}

inline void check_prn(int prn) {
  if (prn < 1 || prn > 63) throw std::range_error("pppmsg: prn " + std::to_string(prn) + " out of range 1..63");
}

inline void set_bitmap(RawMessage& m, const std::string& field, const std::vector<int>& prns) {
  const int width = m.type_schema().field(field).width;
  std::uint64_t raw = 0;
  for (int p : prns) {
    if (p < 1 || p > width) throw std::range_error("pppmsg: prn " + std::to_string(p) + " exceeds " + field + " width");
    raw |= 1ull << (width - p);  // bit for prn 1 is transmitted first
  }
  m.set_raw(field, raw);
}

inline std::vector<int> get_bitmap(const RawMessage& m, const std::string& field) {
  const int width = m.type_schema().field(field).width;
  const std::uint64_t raw = m.raw(field);
  std::vector<int> prns;
  for (int p = 1; p <= width; ++p)
    if ((raw >> (width - p)) & 1u) prns.push_back(p);
  return prns;
}

}  // namespace detail

// ---- capacities (satellites per frame) under a given schema ----

inline int orbit_capacity(const MessageSchema& s) { return detail::count_slots(s.at(2)); }
inline int clock_capacity(const MessageSchema& s) { return detail::count_slots(s.at(4)); }
inline int bias_capacity(const MessageSchema& s) { return detail::count_slots(s.at(3)); }

// ---- typed content -> 456-bit payload ----

inline RawMessage make_mask(const MaskContent& c, const MessageSchema& schema) {
  RawMessage m(schema.at(1));
  m.set_code("epoch", c.epoch);
  m.set_code("iod", c.iod);
  detail::set_bitmap(m, "mask_bds3", c.bds3);
  detail::set_bitmap(m, "mask_gps", c.gps);
  return m;
}

inline RawMessage make_orbit(const OrbitContent& c, const MessageSchema& schema) {
  const auto& ts = schema.at(2);
  RawMessage m(ts);
  m.set_code("epoch", c.epoch);
  m.set_code("iod", c.iod);
  const int slots = detail::count_slots(ts);
  if (static_cast<int>(c.sats.size()) > slots)
    throw std::range_error("pppmsg: " + std::to_string(c.sats.size()) + " orbit records exceed " + std::to_string(slots) + " slots");
  int k = 1;
  for (const auto& sat : c.sats) {
    detail::check_prn(sat.prn);
    m.set_code(detail::slot(k, "system"), system_code(sat.system));
    m.set_code(detail::slot(k, "prn"), sat.prn);
    if (sat.available) {
      m.set_value(detail::slot(k, "radial"), sat.radial);
      m.set_value(detail::slot(k, "along"), sat.along);
      m.set_value(detail::slot(k, "cross"), sat.cross);
    } else {
      m.set_sentinel(detail::slot(k, "radial"));
      m.set_sentinel(detail::slot(k, "along"));
      m.set_sentinel(detail::slot(k, "cross"));
    }
    m.set_code(detail::slot(k, "ura"), sat.ura);
    ++k;
  }
  return m;
}

inline RawMessage make_bias(const BiasContent& c, const MessageSchema& schema) {
  const auto& ts = schema.at(3);
  RawMessage m(ts);
  m.set_code("epoch", c.epoch);
  const int slots = detail::count_slots(ts);
  if (static_cast<int>(c.sats.size()) > slots)
    throw std::range_error("pppmsg: " + std::to_string(c.sats.size()) + " bias records exceed " + std::to_string(slots) + " slots");
  int k = 1;
  for (const auto& sat : c.sats) {
    detail::check_prn(sat.prn);
    m.set_code(detail::slot(k, "system"), system_code(sat.system));
    m.set_code(detail::slot(k, "prn"), sat.prn);
    const int mode_slots = detail::count_mode_slots(ts, k);
    if (static_cast<int>(sat.modes.size()) > mode_slots)
      throw std::range_error("pppmsg: " + std::to_string(sat.modes.size()) + " bias modes exceed " + std::to_string(mode_slots) + " slots");
    int j = 1;
    for (const auto& bm : sat.modes) {
      m.set_code(detail::slot(k, ("mode" + std::to_string(j)).c_str()), bm.mode);
      m.set_value(detail::slot(k, ("bias" + std::to_string(j)).c_str()), bm.bias);
      ++j;
    }
    ++k;
  }
  return m;
}

inline RawMessage make_clock(const ClockContent& c, const MessageSchema& schema) {
  const auto& ts = schema.at(4);
  RawMessage m(ts);
  m.set_code("epoch", c.epoch);
  m.set_code("iod", c.iod);
  const int slots = detail::count_slots(ts);
  if (static_cast<int>(c.sats.size()) > slots)
    throw std::range_error("pppmsg: " + std::to_string(c.sats.size()) + " clock records exceed " + std::to_string(slots) + " slots");
  int k = 1;
  for (const auto& sat : c.sats) {
    detail::check_prn(sat.prn);
    m.set_code(detail::slot(k, "system"), system_code(sat.system));
    m.set_code(detail::slot(k, "prn"), sat.prn);
    if (sat.available) m.set_value(detail::slot(k, "c0"), sat.c0);
    else m.set_sentinel(detail::slot(k, "c0"));
    ++k;
  }
  return m;
}

// ---- 456-bit payload -> typed content ----

inline MaskContent parse_mask(const RawMessage& m) {
  MaskContent c;
  c.epoch = static_cast<long>(m.code("epoch"));
  c.iod = static_cast<int>(m.code("iod"));
  c.bds3 = detail::get_bitmap(m, "mask_bds3");
  c.gps = detail::get_bitmap(m, "mask_gps");
  return c;
}

inline OrbitContent parse_orbit(const RawMessage& m) {
  OrbitContent c;
  c.epoch = static_cast<long>(m.code("epoch"));
  c.iod = static_cast<int>(m.code("iod"));
  const int slots = detail::count_slots(m.type_schema());
  for (int k = 1; k <= slots; ++k) {
    OrbitEntry e;
    e.prn = static_cast<int>(m.code(detail::slot(k, "prn")));
    if (e.prn == 0) continue;
    e.system = system_from_code(m.code(detail::slot(k, "system")));
    e.available = !m.is_sentinel(detail::slot(k, "radial")) && !m.is_sentinel(detail::slot(k, "along")) &&
                  !m.is_sentinel(detail::slot(k, "cross"));
    if (e.available) {
      e.radial = m.value(detail::slot(k, "radial"));
      e.along = m.value(detail::slot(k, "along"));
      e.cross = m.value(detail::slot(k, "cross"));
    }
    e.ura = static_cast<int>(m.code(detail::slot(k, "ura")));
    c.sats.push_back(e);
  }
  return c;
}

inline BiasContent parse_bias(const RawMessage& m) {
  BiasContent c;
  c.epoch = static_cast<long>(m.code("epoch"));
  const int slots = detail::count_slots(m.type_schema());
  for (int k = 1; k <= slots; ++k) {
    BiasEntry e;
    e.prn = static_cast<int>(m.code(detail::slot(k, "prn")));
    if (e.prn == 0) continue;
    e.system = system_from_code(m.code(detail::slot(k, "system")));
    const int mode_slots = detail::count_mode_slots(m.type_schema(), k);
    for (int j = 1; j <= mode_slots; ++j) {
      const auto mode_f = detail::slot(k, ("mode" + std::to_string(j)).c_str());
      const auto bias_f = detail::slot(k, ("bias" + std::to_string(j)).c_str());
      if (m.is_sentinel(mode_f) || m.is_sentinel(bias_f)) continue;
      e.modes.push_back(BiasMode{static_cast<int>(m.code(mode_f)), m.value(bias_f)});
    }
    c.sats.push_back(e);
  }
  return c;
}

inline ClockContent parse_clock(const RawMessage& m) {
  ClockContent c;
  c.epoch = static_cast<long>(m.code("epoch"));
  c.iod = static_cast<int>(m.code("iod"));
  const int slots = detail::count_slots(m.type_schema());
  for (int k = 1; k <= slots; ++k) {
    ClockEntry e;
    e.prn = static_cast<int>(m.code(detail::slot(k, "prn")));
    if (e.prn == 0) continue;
    e.system = system_from_code(m.code(detail::slot(k, "system")));
    e.available = !m.is_sentinel(detail::slot(k, "c0"));
    if (e.available) e.c0 = m.value(detail::slot(k, "c0"));
    c.sats.push_back(e);
  }
  return c;
}

// ---- frame assembly and classification ----

enum class Classification { parsed, null_message, recognized_unimplemented, reserved };

inline Classification classify(int mestype) {
  if (mestype == 63) return Classification::null_message;
  if (mestype >= 1 && mestype <= 4) return Classification::parsed;
  if (mestype >= 5 && mestype <= 7) return Classification::recognized_unimplemented;
  return Classification::reserved;
}

// 6-bit type + 456-bit payload + crc over the leading 462.
inline BitVec assemble_frame(int mestype, const BitVec& payload) {
  if (mestype < 0 || mestype > 63) throw std::invalid_argument("pppmsg: mestype out of range");
  if (payload.size() != static_cast<std::size_t>(kPayloadBits)) throw std::invalid_argument("pppmsg: payload must be 456 bits");
  BitVec frame;
  frame.reserve(kFrameBits);
  append_uint(frame, static_cast<std::uint64_t>(mestype), 6);
  frame.insert(frame.end(), payload.begin(), payload.end());
  const std::uint32_t crc = crc24q::compute(frame);
  append_uint(frame, crc, crc24q::kCrcBits);
  return frame;
}

inline BitVec serialize_message(const MaskContent& c, const MessageSchema& s) { return assemble_frame(1, make_mask(c, s).serialize()); }
inline BitVec serialize_message(const OrbitContent& c, const MessageSchema& s) { return assemble_frame(2, make_orbit(c, s).serialize()); }
inline BitVec serialize_message(const BiasContent& c, const MessageSchema& s) { return assemble_frame(3, make_bias(c, s).serialize()); }
inline BitVec serialize_message(const ClockContent& c, const MessageSchema& s) { return assemble_frame(4, make_clock(c, s).serialize()); }
inline BitVec serialize_null(const MessageSchema& s) { return assemble_frame(63, RawMessage(s.at(63)).serialize()); }

struct ParsedMessage {
  int mestype = 0;
  Classification cls = Classification::reserved;
  std::variant<std::monostate, MaskContent, OrbitContent, BiasContent, ClockContent> content;
};

// Full 486-bit decoded frame body in, typed content out.  The CRC is checked
// before any field is touched.
inline ParsedMessage parse_message(std::span<const std::uint8_t> frame, const MessageSchema& schema) {
  if (frame.size() != static_cast<std::size_t>(kFrameBits)) throw std::invalid_argument("pppmsg: frame body must be 486 bits");
  const auto body = frame.first(kBodyBits);
  const auto crc = static_cast<std::uint32_t>(read_uint(frame, kBodyBits, crc24q::kCrcBits));
  if (!crc24q::verify(body, crc)) throw std::runtime_error("pppmsg: crc mismatch");

  ParsedMessage out;
  out.mestype = static_cast<int>(read_uint(frame, 0, 6));
  out.cls = classify(out.mestype);
  if (out.cls != Classification::parsed) return out;

  if (!schema.has(out.mestype))
    throw std::runtime_error("pppmsg: schema has no layout for type " + std::to_string(out.mestype));
  const auto raw = RawMessage::parse(schema.at(out.mestype), frame.subspan(6, kPayloadBits));
  switch (out.mestype) {
    case 1: out.content = parse_mask(raw); break;
    case 2: out.content = parse_orbit(raw); break;
    case 3: out.content = parse_bias(raw); break;
    case 4: out.content = parse_clock(raw); break;
    default: break;
  }
  return out;
}

// Modular distance between seconds-of-day epochs, in [-43200, 43200).
inline long epoch_delta(long later, long earlier) {
  constexpr long day = 86400;
  long d = (later - earlier) % day;
  if (d < -day / 2) d += day;
  if (d >= day / 2) d -= day;
  return d;
}

}  // namespace b2bsdr::msg
