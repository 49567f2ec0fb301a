#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "b2bsdr/bits.hpp"

// Message payload layouts are configuration, not code: a schema text file
// assigns each message type an ordered list of fields
//
//   field_name bit_width signed|unsigned scale unit [sentinel=<code>]
//
// whose widths sum to exactly 456.  Repeated per-satellite slots are plain
// numbered fields (sat1_prn, sat2_prn, ...).  A sentinel code, where
// declared, encodes "value unavailable".  The bundled default layout is a
// documented stand-in, not any ICD's; everything downstream is written
// against whatever schema is loaded.

namespace b2bsdr::msg {

inline constexpr int kPayloadBits = 456;
inline constexpr int kBodyBits = 462;   // 6-bit type + payload
inline constexpr int kFrameBits = 486;  // body + 24-bit crc

struct FieldDesc {
  std::string name;
  int width = 0;
  bool is_signed = false;
  double scale = 1.0;
  std::string unit;
  bool has_sentinel = false;
  std::int64_t sentinel = 0;
};

class TypeSchema {
 public:
  TypeSchema() = default;
  TypeSchema(int mestype, std::vector<FieldDesc> fields) : mestype_(mestype), fields_(std::move(fields)) {
    int pos = 0;
    for (std::size_t i = 0; i < fields_.size(); ++i) {
      const auto& f = fields_[i];
      if (f.width <= 0 || f.width > 63) throw std::runtime_error("schema: field '" + f.name + "': bad width");
      if (f.scale <= 0) throw std::runtime_error("schema: field '" + f.name + "': scale must be positive");
      if (!index_.emplace(f.name, i).second) throw std::runtime_error("schema: duplicate field '" + f.name + "'");
      if (f.has_sentinel) {
        const std::int64_t lo = f.is_signed ? -(1ll << (f.width - 1)) : 0;
        const std::int64_t hi =
            f.is_signed ? (1ll << (f.width - 1)) - 1 : static_cast<std::int64_t>((1ull << f.width) - 1);
        if (f.sentinel < lo || f.sentinel > hi)
          throw std::runtime_error("schema: field '" + f.name + "': sentinel does not fit width");
      }
      offsets_.push_back(pos);
      pos += f.width;
    }
    if (pos != kPayloadBits)
      throw std::runtime_error("schema: type " + std::to_string(mestype_) + " widths sum to " + std::to_string(pos) +
                               ", expected " + std::to_string(kPayloadBits));
  }

  int mestype() const { return mestype_; }
  const std::vector<FieldDesc>& fields() const { return fields_; }
  bool has(const std::string& name) const { return index_.count(name) != 0; }
  const FieldDesc& field(const std::string& name) const { return fields_[index_of(name)]; }
  std::size_t index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::out_of_range("schema: type " + std::to_string(mestype_) + " has no field '" + name + "'");
    return it->second;
  }
  int offset_of(std::size_t idx) const { return offsets_[idx]; }

 private:
  int mestype_ = 0;
  std::vector<FieldDesc> fields_;
  std::map<std::string, std::size_t> index_;
  std::vector<int> offsets_;
};

class MessageSchema {
 public:
  static MessageSchema parse(const std::string& text) {
    MessageSchema schema;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0, cur_type = -1;
    std::vector<FieldDesc> cur_fields;
    auto flush = [&]() {
      if (cur_type < 0) return;
      if (!schema.types_.emplace(cur_type, TypeSchema(cur_type, cur_fields)).second)
        throw std::runtime_error("schema: duplicate type " + std::to_string(cur_type));
      cur_fields.clear();
    };
    while (std::getline(ss, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::stringstream ls(line);
      std::string first;
      if (!(ls >> first)) continue;
      if (first == "type") {
        flush();
        if (!(ls >> cur_type) || cur_type < 1 || cur_type > 63)
          throw std::runtime_error("schema line " + std::to_string(line_no) + ": bad type number");
        continue;
      }
      if (cur_type < 0) throw std::runtime_error("schema line " + std::to_string(line_no) + ": field before any 'type' line");
      FieldDesc f;
      f.name = first;
      std::string signedness;
      if (!(ls >> f.width >> signedness >> f.scale >> f.unit))
        throw std::runtime_error("schema line " + std::to_string(line_no) + ": expected 'name width signed|unsigned scale unit'");
      if (signedness == "signed") f.is_signed = true;
      else if (signedness == "unsigned") f.is_signed = false;
      else throw std::runtime_error("schema line " + std::to_string(line_no) + ": signedness must be 'signed' or 'unsigned'");
      std::string extra;
      if (ls >> extra) {
        if (extra.rfind("sentinel=", 0) != 0)
          throw std::runtime_error("schema line " + std::to_string(line_no) + ": unexpected token '" + extra + "'");
        try {
          f.sentinel = std::stoll(extra.substr(9));
        } catch (const std::exception&) {
          throw std::runtime_error("schema line " + std::to_string(line_no) + ": bad sentinel code");
        }
        f.has_sentinel = true;
        if (ls >> extra) throw std::runtime_error("schema line " + std::to_string(line_no) + ": trailing tokens");
      }
      cur_fields.push_back(std::move(f));
    }
    flush();
    if (schema.types_.empty()) throw std::runtime_error("schema: no types defined");
    return schema;
  }

  static MessageSchema load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("schema: cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
  }

  static const MessageSchema& builtin_default();

  bool has(int mestype) const { return types_.count(mestype) != 0; }
  const TypeSchema& at(int mestype) const {
    auto it = types_.find(mestype);
    if (it == types_.end()) throw std::out_of_range("schema: no layout for type " + std::to_string(mestype));
    return it->second;
  }
  std::vector<int> types() const {
    std::vector<int> t;
    for (const auto& [k, v] : types_) t.push_back(k);
    return t;
  }

 private:
  std::map<int, TypeSchema> types_;
};

// One payload's worth of raw field codes, in schema order.
class RawMessage {
 public:
  explicit RawMessage(const TypeSchema& ts) : ts_(&ts), raw_(ts.fields().size(), 0) {
    // fields with sentinels start unavailable rather than at a spurious zero
    for (std::size_t i = 0; i < raw_.size(); ++i) {
      const auto& f = ts.fields()[i];
      if (f.has_sentinel)
        raw_[i] = f.is_signed ? from_signed(f.sentinel, f.width) : static_cast<std::uint64_t>(f.sentinel);
    }
  }

  static RawMessage parse(const TypeSchema& ts, std::span<const std::uint8_t> payload) {
    if (payload.size() != static_cast<std::size_t>(kPayloadBits)) throw std::invalid_argument("schema: payload must be 456 bits");
    RawMessage m(ts);
    for (std::size_t i = 0; i < m.raw_.size(); ++i)
      m.raw_[i] = read_uint(payload, static_cast<std::size_t>(ts.offset_of(i)), ts.fields()[i].width);
    return m;
  }

  BitVec serialize() const {
    BitVec out;
    out.reserve(kPayloadBits);
    for (std::size_t i = 0; i < raw_.size(); ++i) append_uint(out, raw_[i], ts_->fields()[i].width);
    return out;
  }

  const TypeSchema& type_schema() const { return *ts_; }

  std::uint64_t raw(const std::string& name) const { return raw_[ts_->index_of(name)]; }
  void set_raw(const std::string& name, std::uint64_t v) {
    const auto i = ts_->index_of(name);
    const auto& f = ts_->fields()[i];
    if (f.width < 64 && v >= (1ull << f.width)) throw std::range_error("schema: field '" + name + "': raw value too wide");
    raw_[i] = v;
  }

  std::int64_t code(const std::string& name) const {
    const auto i = ts_->index_of(name);
    const auto& f = ts_->fields()[i];
    return f.is_signed ? to_signed(raw_[i], f.width) : static_cast<std::int64_t>(raw_[i]);
  }

  void set_code(const std::string& name, std::int64_t c) {
    const auto i = ts_->index_of(name);
    const auto& f = ts_->fields()[i];
    if (f.is_signed) {
      raw_[i] = from_signed(c, f.width);  // throws range_error when too wide
    } else {
      if (c < 0 || (f.width < 64 && static_cast<std::uint64_t>(c) >= (1ull << f.width)))
        throw std::range_error("schema: field '" + name + "': code out of range");
      raw_[i] = static_cast<std::uint64_t>(c);
    }
  }

  bool is_sentinel(const std::string& name) const {
    const auto& f = ts_->field(name);
    return f.has_sentinel && code(name) == f.sentinel;
  }

  void set_sentinel(const std::string& name) {
    const auto& f = ts_->field(name);
    if (!f.has_sentinel) throw std::logic_error("schema: field '" + name + "' has no sentinel");
    set_code(name, f.sentinel);
  }

  // Scaled physical value; the sentinel never reads as a number.
  double value(const std::string& name) const {
    if (is_sentinel(name)) throw std::logic_error("schema: field '" + name + "' is unavailable");
    return static_cast<double>(code(name)) * ts_->field(name).scale;
  }

  // Scaled write; a value that would land on the sentinel code is an error
  // (the caller must mark unavailability explicitly).
  void set_value(const std::string& name, double v) {
    const auto& f = ts_->field(name);
    const double c = std::round(v / f.scale);
    if (!std::isfinite(c) || std::fabs(c) > 9.0e18) throw std::range_error("schema: field '" + name + "': value out of range");
    const auto code = static_cast<std::int64_t>(c);
    if (f.has_sentinel && code == f.sentinel)
      throw std::range_error("schema: field '" + name + "': value collides with the sentinel code");
    set_code(name, code);
  }

 private:
  const TypeSchema* ts_;
  std::vector<std::uint64_t> raw_;
};

// Bundled non-ICD default layout.  Empty satellite slots carry prn 0;
// numeric fields use their most-negative code (or all-ones for mode ids) as
// the "unavailable" sentinel.
inline const char* kDefaultSchemaText =
    "# default message layout (non-ICD stand-in)\n"
    "type 1\n"
    "epoch 17 unsigned 1 s\n"
    "iod 4 unsigned 1 -\n"
    "mask_bds3 63 unsigned 1 bitmap\n"
    "mask_gps 63 unsigned 1 bitmap\n"
    "reserved1 62 unsigned 1 -\n"
    "reserved2 62 unsigned 1 -\n"
    "reserved3 62 unsigned 1 -\n"
    "reserved4 62 unsigned 1 -\n"
    "reserved5 61 unsigned 1 -\n"
    "type 2\n"
    "epoch 17 unsigned 1 s\n"
    "iod 4 unsigned 1 -\n"
    "sat1_system 1 unsigned 1 -\n"
    "sat1_prn 6 unsigned 1 -\n"
    "sat1_radial 15 signed 0.0016 m sentinel=-16384\n"
    "sat1_along 15 signed 0.0016 m sentinel=-16384\n"
    "sat1_cross 15 signed 0.0016 m sentinel=-16384\n"
    "sat1_ura 6 unsigned 1 -\n"
    "sat2_system 1 unsigned 1 -\n"
    "sat2_prn 6 unsigned 1 -\n"
    "sat2_radial 15 signed 0.0016 m sentinel=-16384\n"
    "sat2_along 15 signed 0.0016 m sentinel=-16384\n"
    "sat2_cross 15 signed 0.0016 m sentinel=-16384\n"
    "sat2_ura 6 unsigned 1 -\n"
    "sat3_system 1 unsigned 1 -\n"
    "sat3_prn 6 unsigned 1 -\n"
    "sat3_radial 15 signed 0.0016 m sentinel=-16384\n"
    "sat3_along 15 signed 0.0016 m sentinel=-16384\n"
    "sat3_cross 15 signed 0.0016 m sentinel=-16384\n"
    "sat3_ura 6 unsigned 1 -\n"
    "sat4_system 1 unsigned 1 -\n"
    "sat4_prn 6 unsigned 1 -\n"
    "sat4_radial 15 signed 0.0016 m sentinel=-16384\n"
    "sat4_along 15 signed 0.0016 m sentinel=-16384\n"
    "sat4_cross 15 signed 0.0016 m sentinel=-16384\n"
    "sat4_ura 6 unsigned 1 -\n"
    "sat5_system 1 unsigned 1 -\n"
    "sat5_prn 6 unsigned 1 -\n"
    "sat5_radial 15 signed 0.0016 m sentinel=-16384\n"
    "sat5_along 15 signed 0.0016 m sentinel=-16384\n"
    "sat5_cross 15 signed 0.0016 m sentinel=-16384\n"
    "sat5_ura 6 unsigned 1 -\n"
    "sat6_system 1 unsigned 1 -\n"
    "sat6_prn 6 unsigned 1 -\n"
    "sat6_radial 15 signed 0.0016 m sentinel=-16384\n"
    "sat6_along 15 signed 0.0016 m sentinel=-16384\n"
    "sat6_cross 15 signed 0.0016 m sentinel=-16384\n"
    "sat6_ura 6 unsigned 1 -\n"
    "sat7_system 1 unsigned 1 -\n"
    "sat7_prn 6 unsigned 1 -\n"
    "sat7_radial 15 signed 0.0016 m sentinel=-16384\n"
    "sat7_along 15 signed 0.0016 m sentinel=-16384\n"
    "sat7_cross 15 signed 0.0016 m sentinel=-16384\n"
    "sat7_ura 6 unsigned 1 -\n"
    "reserved 29 unsigned 1 -\n"
    "type 3\n"
    "epoch 17 unsigned 1 s\n"
    "sat1_system 1 unsigned 1 -\n"
    "sat1_prn 6 unsigned 1 -\n"
    "sat1_mode1 4 unsigned 1 - sentinel=15\n"
    "sat1_bias1 12 signed 0.0017 m sentinel=-2048\n"
    "sat1_mode2 4 unsigned 1 - sentinel=15\n"
    "sat1_bias2 12 signed 0.0017 m sentinel=-2048\n"
    "sat1_mode3 4 unsigned 1 - sentinel=15\n"
    "sat1_bias3 12 signed 0.0017 m sentinel=-2048\n"
    "sat1_mode4 4 unsigned 1 - sentinel=15\n"
    "sat1_bias4 12 signed 0.0017 m sentinel=-2048\n"
    "sat2_system 1 unsigned 1 -\n"
    "sat2_prn 6 unsigned 1 -\n"
    "sat2_mode1 4 unsigned 1 - sentinel=15\n"
    "sat2_bias1 12 signed 0.0017 m sentinel=-2048\n"
    "sat2_mode2 4 unsigned 1 - sentinel=15\n"
    "sat2_bias2 12 signed 0.0017 m sentinel=-2048\n"
    "sat2_mode3 4 unsigned 1 - sentinel=15\n"
    "sat2_bias3 12 signed 0.0017 m sentinel=-2048\n"
    "sat2_mode4 4 unsigned 1 - sentinel=15\n"
    "sat2_bias4 12 signed 0.0017 m sentinel=-2048\n"
    "sat3_system 1 unsigned 1 -\n"
    "sat3_prn 6 unsigned 1 -\n"
    "sat3_mode1 4 unsigned 1 - sentinel=15\n"
    "sat3_bias1 12 signed 0.0017 m sentinel=-2048\n"
    "sat3_mode2 4 unsigned 1 - sentinel=15\n"
    "sat3_bias2 12 signed 0.0017 m sentinel=-2048\n"
    "sat3_mode3 4 unsigned 1 - sentinel=15\n"
    "sat3_bias3 12 signed 0.0017 m sentinel=-2048\n"
    "sat3_mode4 4 unsigned 1 - sentinel=15\n"
    "sat3_bias4 12 signed 0.0017 m sentinel=-2048\n"
    "sat4_system 1 unsigned 1 -\n"
    "sat4_prn 6 unsigned 1 -\n"
    "sat4_mode1 4 unsigned 1 - sentinel=15\n"
    "sat4_bias1 12 signed 0.0017 m sentinel=-2048\n"
    "sat4_mode2 4 unsigned 1 - sentinel=15\n"
    "sat4_bias2 12 signed 0.0017 m sentinel=-2048\n"
    "sat4_mode3 4 unsigned 1 - sentinel=15\n"
    "sat4_bias3 12 signed 0.0017 m sentinel=-2048\n"
    "sat4_mode4 4 unsigned 1 - sentinel=15\n"
    "sat4_bias4 12 signed 0.0017 m sentinel=-2048\n"
    "sat5_system 1 unsigned 1 -\n"
    "sat5_prn 6 unsigned 1 -\n"
    "sat5_mode1 4 unsigned 1 - sentinel=15\n"
    "sat5_bias1 12 signed 0.0017 m sentinel=-2048\n"
    "sat5_mode2 4 unsigned 1 - sentinel=15\n"
    "sat5_bias2 12 signed 0.0017 m sentinel=-2048\n"
    "sat5_mode3 4 unsigned 1 - sentinel=15\n"
    "sat5_bias3 12 signed 0.0017 m sentinel=-2048\n"
    "sat5_mode4 4 unsigned 1 - sentinel=15\n"
    "sat5_bias4 12 signed 0.0017 m sentinel=-2048\n"
    "sat6_system 1 unsigned 1 -\n"
    "sat6_prn 6 unsigned 1 -\n"
    "sat6_mode1 4 unsigned 1 - sentinel=15\n"
    "sat6_bias1 12 signed 0.0017 m sentinel=-2048\n"
    "sat6_mode2 4 unsigned 1 - sentinel=15\n"
    "sat6_bias2 12 signed 0.0017 m sentinel=-2048\n"
    "sat6_mode3 4 unsigned 1 - sentinel=15\n"
    "sat6_bias3 12 signed 0.0017 m sentinel=-2048\n"
    "sat6_mode4 4 unsigned 1 - sentinel=15\n"
    "sat6_bias4 12 signed 0.0017 m sentinel=-2048\n"
    "reserved 13 unsigned 1 -\n"
    "type 4\n"
    "epoch 17 unsigned 1 s\n"
    "iod 4 unsigned 1 -\n"
    "sat1_system 1 unsigned 1 -\n"
    "sat1_prn 6 unsigned 1 -\n"
    "sat1_c0 15 signed 0.0016 m sentinel=-16384\n"
    "sat2_system 1 unsigned 1 -\n"
    "sat2_prn 6 unsigned 1 -\n"
    "sat2_c0 15 signed 0.0016 m sentinel=-16384\n"
    "sat3_system 1 unsigned 1 -\n"
    "sat3_prn 6 unsigned 1 -\n"
    "sat3_c0 15 signed 0.0016 m sentinel=-16384\n"
    "sat4_system 1 unsigned 1 -\n"
    "sat4_prn 6 unsigned 1 -\n"
    "sat4_c0 15 signed 0.0016 m sentinel=-16384\n"
    "sat5_system 1 unsigned 1 -\n"
    "sat5_prn 6 unsigned 1 -\n"
    "sat5_c0 15 signed 0.0016 m sentinel=-16384\n"
    "sat6_system 1 unsigned 1 -\n"
    "sat6_prn 6 unsigned 1 -\n"
    "sat6_c0 15 signed 0.0016 m sentinel=-16384\n"
    "sat7_system 1 unsigned 1 -\n"
    "sat7_prn 6 unsigned 1 -\n"
    "sat7_c0 15 signed 0.0016 m sentinel=-16384\n"
    "sat8_system 1 unsigned 1 -\n"
    "sat8_prn 6 unsigned 1 -\n"
    "sat8_c0 15 signed 0.0016 m sentinel=-16384\n"
    "sat9_system 1 unsigned 1 -\n"
    "sat9_prn 6 unsigned 1 -\n"
    "sat9_c0 15 signed 0.0016 m sentinel=-16384\n"
    "sat10_system 1 unsigned 1 -\n"
    "sat10_prn 6 unsigned 1 -\n"
    "sat10_c0 15 signed 0.0016 m sentinel=-16384\n"
    "sat11_system 1 unsigned 1 -\n"
    "sat11_prn 6 unsigned 1 -\n"
    "sat11_c0 15 signed 0.0016 m sentinel=-16384\n"
    "sat12_system 1 unsigned 1 -\n"
    "sat12_prn 6 unsigned 1 -\n"
    "sat12_c0 15 signed 0.0016 m sentinel=-16384\n"
    "sat13_system 1 unsigned 1 -\n"
    "sat13_prn 6 unsigned 1 -\n"
    "sat13_c0 15 signed 0.0016 m sentinel=-16384\n"
    "sat14_system 1 unsigned 1 -\n"
    "sat14_prn 6 unsigned 1 -\n"
    "sat14_c0 15 signed 0.0016 m sentinel=-16384\n"
    "sat15_system 1 unsigned 1 -\n"
    "sat15_prn 6 unsigned 1 -\n"
    "sat15_c0 15 signed 0.0016 m sentinel=-16384\n"
    "sat16_system 1 unsigned 1 -\n"
    "sat16_prn 6 unsigned 1 -\n"
    "sat16_c0 15 signed 0.0016 m sentinel=-16384\n"
    "sat17_system 1 unsigned 1 -\n"
    "sat17_prn 6 unsigned 1 -\n"
    "sat17_c0 15 signed 0.0016 m sentinel=-16384\n"
    "sat18_system 1 unsigned 1 -\n"
    "sat18_prn 6 unsigned 1 -\n"
    "sat18_c0 15 signed 0.0016 m sentinel=-16384\n"
    "sat19_system 1 unsigned 1 -\n"
    "sat19_prn 6 unsigned 1 -\n"
    "sat19_c0 15 signed 0.0016 m sentinel=-16384\n"
    "reserved 17 unsigned 1 -\n"
    "type 63\n"
    "reserved1 57 unsigned 1 -\n"
    "reserved2 57 unsigned 1 -\n"
    "reserved3 57 unsigned 1 -\n"
    "reserved4 57 unsigned 1 -\n"
    "reserved5 57 unsigned 1 -\n"
    "reserved6 57 unsigned 1 -\n"
    "reserved7 57 unsigned 1 -\n"
    "reserved8 57 unsigned 1 -\n";

inline const MessageSchema& MessageSchema::builtin_default() {
  static const MessageSchema schema = MessageSchema::parse(kDefaultSchemaText);
  return schema;
}

}  // namespace b2bsdr::msg
