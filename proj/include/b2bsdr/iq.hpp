#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

// IQ sample files and their sidecar headers.  Two sample layouts:
//
//   int8_iq     interleaved I,Q as signed 8-bit values, file order I0 Q0 I1 Q1
//   packed2_iq  each byte holds two complex samples, earliest in the low
//               nibble; within a nibble bits [1:0] are I and [3:2] are Q,
//               sign-magnitude with bit1 = sign (1 negative) and bit0 =
//               magnitude (0 decodes to 1, 1 to 3)
//
// The sidecar is <sample file>.hdr, three text lines:
//
//   sample_rate_hz=<float>
//   format=int8_iq|packed2_iq
//   center_offset_hz=<float>
//
// An odd trailing byte in an int8 file is a truncated sample: it is dropped
// and flagged.  A packed file written with an odd sample count carries one
// padding sample (+1,+1) at the end.

namespace b2bsdr::iq {

enum class Format { int8_iq, packed2_iq };

inline const char* format_name(Format f) { return f == Format::int8_iq ? "int8_iq" : "packed2_iq"; }

inline Format format_from_name(const std::string& s) {
  if (s == "int8_iq") return Format::int8_iq;
  if (s == "packed2_iq") return Format::packed2_iq;
  throw std::runtime_error("iq: unknown format '" + s + "'");
}

struct SidecarHeader {
  double sample_rate_hz = 0;
  Format format = Format::int8_iq;
  double center_offset_hz = 0;
};

inline std::string sidecar_path(const std::string& sample_path) { return sample_path + ".hdr"; }

inline void write_sidecar(const std::string& sample_path, const SidecarHeader& h) {
  std::ofstream f(sidecar_path(sample_path));
  if (!f) throw std::runtime_error("iq: cannot write " + sidecar_path(sample_path));
  f << "sample_rate_hz=" << h.sample_rate_hz << "\n";
  f << "format=" << format_name(h.format) << "\n";
  f << "center_offset_hz=" << h.center_offset_hz << "\n";
}

inline SidecarHeader read_sidecar(const std::string& sample_path) {
  std::ifstream f(sidecar_path(sample_path));
  if (!f) throw std::runtime_error("iq: cannot open " + sidecar_path(sample_path));
  SidecarHeader h;
  bool have_rate = false, have_format = false;
  std::string line;
  while (std::getline(f, line)) {
    const auto eq = line.find('=');
    if (line.empty()) continue;
    if (eq == std::string::npos) throw std::runtime_error("iq: bad sidecar line '" + line + "'");
    const std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    if (key == "sample_rate_hz") {
      h.sample_rate_hz = std::stod(val);
      have_rate = true;
    } else if (key == "format") {
      h.format = format_from_name(val);
      have_format = true;
    } else if (key == "center_offset_hz") {
      h.center_offset_hz = std::stod(val);
    } else {
      throw std::runtime_error("iq: unknown sidecar key '" + key + "'");
    }
  }
  if (!have_rate || h.sample_rate_hz <= 0) throw std::runtime_error("iq: sidecar missing sample_rate_hz");
  if (!have_format) throw std::runtime_error("iq: sidecar missing format");
  return h;
}

namespace detail {

inline std::uint8_t pack_component(float x, float threshold) {
  std::uint8_t bits = x < 0 ? 2 : 0;
  if (std::fabs(x) > threshold) bits |= 1;
  return bits;
}

inline float unpack_component(std::uint8_t bits) {
  const float mag = (bits & 1) ? 3.0f : 1.0f;
  return (bits & 2) ? -mag : mag;
}

}  // namespace detail

class IqFileWriter {
 public:
  // scale multiplies samples before int8 rounding; threshold splits the two
  // packed magnitude levels (in pre-scale units)
  IqFileWriter(const std::string& path, const SidecarHeader& header, double scale = 1.0, double threshold = 1.0)
      : file_(path, std::ios::binary), header_(header), scale_(scale), threshold_(threshold) {
    if (!file_) throw std::runtime_error("iq: cannot write " + path);
    write_sidecar(path, header);
  }

  void write(std::span<const std::complex<float>> samples) {
    std::vector<std::uint8_t> buf;
    if (header_.format == Format::int8_iq) {
      buf.reserve(samples.size() * 2);
      for (const auto& s : samples) {
        buf.push_back(static_cast<std::uint8_t>(quantize8(s.real())));
        buf.push_back(static_cast<std::uint8_t>(quantize8(s.imag())));
      }
    } else {
      buf.reserve(samples.size() / 2 + 1);
      for (const auto& s : samples) {
        const std::uint8_t nibble = static_cast<std::uint8_t>(
            detail::pack_component(s.real(), static_cast<float>(threshold_)) |
            (detail::pack_component(s.imag(), static_cast<float>(threshold_)) << 2));
        if (!have_pending_) {
          pending_ = nibble;
          have_pending_ = true;
        } else {
          buf.push_back(static_cast<std::uint8_t>(pending_ | (nibble << 4)));
          have_pending_ = false;
        }
      }
    }
    file_.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    written_ += samples.size();
  }

  // flushes a pending odd packed sample as a padded byte
  void close() {
    if (have_pending_) {
      file_.put(static_cast<char>(pending_));
      have_pending_ = false;
    }
    file_.close();
  }

  std::uint64_t samples_written() const { return written_; }

  ~IqFileWriter() {
    if (file_.is_open()) close();
  }

 private:
  std::int8_t quantize8(float x) const {
    const float v = std::round(x * static_cast<float>(scale_));
    return static_cast<std::int8_t>(std::clamp(v, -127.0f, 127.0f));
  }

  std::ofstream file_;
  SidecarHeader header_;
  double scale_, threshold_;
  std::uint8_t pending_ = 0;
  bool have_pending_ = false;
  std::uint64_t written_ = 0;
};

// Reads quantized samples back as floats: int8 values verbatim, packed
// samples as their +-1/+-3 decode.  Scale is the caller's business.
class IqFileReader {
 public:
  explicit IqFileReader(const std::string& path) : header_(read_sidecar(path)), file_(path, std::ios::binary) {
    if (!file_) throw std::runtime_error("iq: cannot open " + path);
    file_.seekg(0, std::ios::end);
    const std::uint64_t bytes = static_cast<std::uint64_t>(file_.tellg());
    file_.seekg(0, std::ios::beg);
    if (header_.format == Format::int8_iq) {
      total_samples_ = bytes / 2;
      truncated_tail_ = (bytes % 2) != 0;
    } else {
      total_samples_ = bytes * 2;
    }
  }

  const SidecarHeader& header() const { return header_; }
  std::uint64_t total_samples() const { return total_samples_; }
  bool truncated_tail() const { return truncated_tail_; }

  // fills out, returns the number of samples produced; 0 at end of file
  std::size_t read(std::span<std::complex<float>> out) {
    std::size_t produced = 0;
    if (header_.format == Format::int8_iq) {
      std::vector<std::int8_t> buf(out.size() * 2);
      file_.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
      const std::size_t got = static_cast<std::size_t>(file_.gcount()) / 2;
      for (std::size_t i = 0; i < got; ++i)
        out[i] = {static_cast<float>(buf[2 * i]), static_cast<float>(buf[2 * i + 1])};
      produced = got;
    } else {
      std::vector<std::uint8_t> buf((out.size() + 1) / 2);
      file_.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
      const std::size_t bytes = static_cast<std::size_t>(file_.gcount());
      for (std::size_t b = 0; b < bytes; ++b) {
        for (int half = 0; half < 2 && produced < out.size(); ++half) {
          const std::uint8_t nibble = (half == 0) ? (buf[b] & 0x0f) : (buf[b] >> 4);
          out[produced++] = {detail::unpack_component(nibble & 0x3), detail::unpack_component((nibble >> 2) & 0x3)};
        }
      }
    }
    return produced;
  }

 private:
  SidecarHeader header_;
  std::ifstream file_;
  std::uint64_t total_samples_ = 0;
  bool truncated_tail_ = false;
};

}  // namespace b2bsdr::iq
