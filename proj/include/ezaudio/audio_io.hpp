#pragma once

// RIFF/WAVE decode and encode for 16-bit PCM and 32-bit IEEE float.
//
// Samples are kept interleaved in frame order: channel c of frame f lives at
// index f * channels + c. PCM16 maps to amplitude by v / 32768.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "ezaudio/error.hpp"

namespace ezaudio {

enum class SampleFormat : std::uint8_t { PCM16, Float32 };

struct AudioSignal {
  std::vector<double> samples;
  std::uint32_t sample_rate = 44100;
  std::uint16_t channels = 1;
  SampleFormat format = SampleFormat::PCM16;

  std::size_t frames() const noexcept { return channels == 0 ? 0 : samples.size() / channels; }

  friend bool operator==(const AudioSignal&, const AudioSignal&) = default;
};

namespace wav {

inline constexpr std::uint16_t kFormatPcm = 0x0001;
inline constexpr std::uint16_t kFormatFloat = 0x0003;
inline constexpr std::uint16_t kFormatExtensible = 0xFFFE;
inline constexpr std::size_t kCanonicalHeaderSize = 44;

namespace detail {

inline std::uint16_t load_u16(std::span<const std::byte> b, std::size_t at) noexcept {
  return static_cast<std::uint16_t>(std::to_integer<unsigned>(b[at]) |
                                    (std::to_integer<unsigned>(b[at + 1]) << 8));
}

inline std::uint32_t load_u32(std::span<const std::byte> b, std::size_t at) noexcept {
  return static_cast<std::uint32_t>(load_u16(b, at)) |
         (static_cast<std::uint32_t>(load_u16(b, at + 2)) << 16);
}

inline void store_u16(std::vector<std::byte>& out, std::uint16_t v) {
  out.push_back(static_cast<std::byte>(v & 0xFF));
  out.push_back(static_cast<std::byte>(v >> 8));
}

inline void store_u32(std::vector<std::byte>& out, std::uint32_t v) {
  store_u16(out, static_cast<std::uint16_t>(v & 0xFFFF));
  store_u16(out, static_cast<std::uint16_t>(v >> 16));
}

inline void store_tag(std::vector<std::byte>& out, const char (&tag)[5]) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>(tag[i]));
}

inline bool tag_equals(std::span<const std::byte> b, std::size_t at, const char (&tag)[5]) noexcept {
  for (int i = 0; i < 4; ++i) {
    if (b[at + i] != static_cast<std::byte>(tag[i])) return false;
  }
  return true;
}

[[noreturn]] inline void malformed(const std::string& what, std::size_t offset) {
  throw error(errc::malformed_wav, what + " at offset " + std::to_string(offset));
}

inline std::string hex_tag(std::uint16_t tag) {
  static constexpr char digits[] = "0123456789ABCDEF";
  std::string s = "0x";
  for (int shift = 12; shift >= 0; shift -= 4) s.push_back(digits[(tag >> shift) & 0xF]);
  return s;
}

}  // namespace detail

/// PCM16 quantisation: round half away from zero, clamp to [-32768, 32767].
inline std::int16_t quantize_pcm16(double amplitude) noexcept {
  const double scaled = std::round(amplitude * 32768.0);
  return static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

inline double dequantize_pcm16(std::int16_t v) noexcept { return static_cast<double>(v) / 32768.0; }

inline AudioSignal decode(std::span<const std::byte> bytes) {
  using namespace detail;
  if (bytes.size() < 12) malformed("file shorter than the RIFF header", bytes.size());
  if (!tag_equals(bytes, 0, "RIFF")) malformed("missing RIFF magic", 0);
  if (!tag_equals(bytes, 8, "WAVE")) malformed("missing WAVE form type", 8);

  bool have_fmt = false;
  std::uint16_t tag = 0, channels = 0, bits = 0, block_align = 0;
  std::uint32_t sample_rate = 0;
  std::size_t data_offset = 0, data_size = 0;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::size_t size = load_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (size > bytes.size() - body) malformed("chunk extends past end of file", pos);

    if (tag_equals(bytes, pos, "fmt ")) {
      if (size < 16) malformed("fmt chunk shorter than 16 bytes", pos);
      tag = load_u16(bytes, body);
      channels = load_u16(bytes, body + 2);
      sample_rate = load_u32(bytes, body + 4);
      block_align = load_u16(bytes, body + 12);
      bits = load_u16(bytes, body + 14);
      if (tag == kFormatExtensible) {
        if (size < 40) malformed("extensible fmt chunk shorter than 40 bytes", pos);
        // First two bytes of the sub-format GUID carry the real format tag.
        tag = load_u16(bytes, body + 24);
      }
      have_fmt = true;
    } else if (tag_equals(bytes, pos, "data")) {
      data_offset = body;
      data_size = size;
      have_data = true;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt) malformed("missing fmt chunk", pos);
  if (!have_data) malformed("missing data chunk", pos);

  AudioSignal sig;
  if (tag == kFormatPcm && bits == 16) {
    sig.format = SampleFormat::PCM16;
  } else if (tag == kFormatFloat && bits == 32) {
    sig.format = SampleFormat::Float32;
  } else {
    throw error(errc::unsupported_format, "format tag " + hex_tag(tag) + " with " +
                                              std::to_string(bits) +
                                              " bits per sample (only PCM16 and Float32)");
  }
  if (channels == 0) malformed("fmt declares zero channels", 12);
  if (sample_rate == 0) malformed("fmt declares zero sample rate", 12);
  const std::size_t width = bits / 8;
  if (block_align != width * channels) malformed("block_align inconsistent with format", 12);
  if (data_size % block_align != 0) malformed("data size is not a whole number of frames", data_offset);

  sig.sample_rate = sample_rate;
  sig.channels = channels;
  const std::size_t count = data_size / width;
  sig.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t at = data_offset + i * width;
    if (sig.format == SampleFormat::PCM16) {
      sig.samples[i] = dequantize_pcm16(static_cast<std::int16_t>(load_u16(bytes, at)));
    } else {
      sig.samples[i] = static_cast<double>(std::bit_cast<float>(load_u32(bytes, at)));
    }
  }
  return sig;
}

/// Canonical 44-byte-header encoding in the signal's own format.
inline std::vector<std::byte> encode(const AudioSignal& sig) {
  using namespace detail;
  if (sig.channels == 0) throw error(errc::invalid_parameter, "signal must have at least one channel");
  if (sig.sample_rate == 0) throw error(errc::invalid_parameter, "signal sample rate must be positive");
  if (sig.samples.size() % sig.channels != 0) {
    throw error(errc::invalid_parameter, "sample count is not a multiple of the channel count");
  }
  const std::uint16_t width = sig.format == SampleFormat::PCM16 ? 2 : 4;
  const std::uint64_t data_size = static_cast<std::uint64_t>(sig.samples.size()) * width;
  if (data_size > 0xFFFFFFFFull - 36) throw error(errc::invalid_parameter, "signal too long for RIFF");

  std::vector<std::byte> out;
  out.reserve(kCanonicalHeaderSize + data_size);
  store_tag(out, "RIFF");
  store_u32(out, static_cast<std::uint32_t>(36 + data_size));
  store_tag(out, "WAVE");
  store_tag(out, "fmt ");
  store_u32(out, 16);
  store_u16(out, sig.format == SampleFormat::PCM16 ? kFormatPcm : kFormatFloat);
  store_u16(out, sig.channels);
  store_u32(out, sig.sample_rate);
  store_u32(out, sig.sample_rate * sig.channels * width);
  store_u16(out, static_cast<std::uint16_t>(sig.channels * width));
  store_u16(out, static_cast<std::uint16_t>(width * 8));
  store_tag(out, "data");
  store_u32(out, static_cast<std::uint32_t>(data_size));
  for (double v : sig.samples) {
    if (sig.format == SampleFormat::PCM16) {
      store_u16(out, static_cast<std::uint16_t>(quantize_pcm16(v)));
    } else {
      store_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
  }
  return out;
}

}  // namespace wav

inline std::vector<std::byte> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::io, "cannot open " + path.string() + " for reading");
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::byte> bytes(raw.size());
  std::memcpy(bytes.data(), raw.data(), raw.size());
  return bytes;
}

inline void write_file_bytes(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw error(errc::io, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw error(errc::io, "write failed for " + path.string());
}

inline AudioSignal read_wav(const std::filesystem::path& path) {
  return wav::decode(read_file_bytes(path));
}

inline void write_wav(const std::filesystem::path& path, const AudioSignal& signal) {
  write_file_bytes(path, wav::encode(signal));
}

}  // namespace ezaudio
