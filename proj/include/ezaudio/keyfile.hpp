#pragma once

// Binary cipher (.ezc) and key (.ezk) files. All fields little-endian.
//
// Cipher, 25-byte header:
//   "EZC1" | u8 version=1 | u32 sample_rate | u16 channels | u16 reserved=0 |
//   u64 length | u32 block_size | length x f64 residues
//
// Key, 94-byte header:
//   "EZK1" | u8 version=1 | f64 sigma rho beta dt x0 y0 z0 scale | u32 skip |
//   u8 component (0=x 1=y 2=z) | f64 N | u32 block_size | u64 length |
//   length x i64 modular key

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ezaudio/audio_io.hpp"
#include "ezaudio/elzaki_codec.hpp"
#include "ezaudio/error.hpp"

namespace ezaudio::keyfile {

inline constexpr std::uint8_t kVersion = 1;
inline constexpr std::size_t kCipherHeaderSize = 25;
inline constexpr std::size_t kKeyHeaderSize = 94;
inline constexpr std::size_t kKeyComponentOffset = 73;
inline constexpr std::size_t kKeyModulusOffset = 74;

/// Extra information gathered while decoding.
struct ReadReport {
  std::uint64_t trailing_bytes = 0;  // bytes past the declared payload, ignored
};

namespace detail {

class Writer {
 public:
  explicit Writer(std::size_t reserve) { out_.reserve(reserve); }

  void tag(const char (&t)[5]) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::byte>(t[i]));
  }
  void u8(std::uint8_t v) { out_.push_back(static_cast<std::byte>(v)); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void i64(std::int64_t v) { le(static_cast<std::uint64_t>(v), 8); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }

  std::vector<std::byte> take() && { return std::move(out_); }

 private:
  void le(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) out_.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFF));
  }
  std::vector<std::byte> out_;
};

class Reader {
 public:
  Reader(std::span<const std::byte> bytes, const char* what) : bytes_(bytes), what_(what) {}

  void expect_magic(const char (&t)[5]) {
    need(4);
    for (int i = 0; i < 4; ++i) {
      if (bytes_[pos_ + i] != static_cast<std::byte>(t[i])) {
        throw error(errc::format, std::string(what_) + ": bad magic, expected \"" + t + "\"");
      }
    }
    pos_ += 4;
  }
  std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  std::int64_t i64() { return static_cast<std::int64_t>(le(8)); }
  double f64() { return std::bit_cast<double>(le(8)); }

  /// Checks that count items of the given width remain.
  void need_payload(std::uint64_t count, std::size_t width) const {
    const std::uint64_t available = (bytes_.size() - pos_) / width;
    if (count > available) {
      throw error(errc::length_mismatch, std::string(what_) + ": header declares " +
                                             std::to_string(count) + " values but only " +
                                             std::to_string(available) + " are present");
    }
  }

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw error(errc::length_mismatch, std::string(what_) + ": truncated header at offset " +
                                             std::to_string(pos_));
    }
  }
  std::uint64_t le(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(std::to_integer<unsigned>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += static_cast<std::size_t>(width);
    return v;
  }

  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
  const char* what_;
};

inline void check_version(std::uint8_t version, const char* what) {
  if (version != kVersion) {
    throw error(errc::format, std::string(what) + ": unsupported version " + std::to_string(version));
  }
}

}  // namespace detail

inline std::vector<std::byte> encode_cipher(const CipherAudio& cipher) {
  for (std::size_t i = 0; i < cipher.c.size(); ++i) {
    if (!(cipher.c[i] >= 0.0) || !std::isfinite(cipher.c[i])) {
      throw error(errc::invalid_parameter, "cipher residue at index " + std::to_string(i) +
                                               " is not a finite non-negative value");
    }
  }
  detail::Writer w(kCipherHeaderSize + 8 * cipher.c.size());
  w.tag("EZC1");
  w.u8(kVersion);
  w.u32(cipher.sample_rate);
  w.u16(cipher.channels);
  w.u16(0);
  w.u64(cipher.c.size());
  w.u32(cipher.block_size);
  for (double v : cipher.c) w.f64(v);
  return std::move(w).take();
}

inline CipherAudio decode_cipher(std::span<const std::byte> bytes, ReadReport* report = nullptr) {
  detail::Reader r(bytes, "cipher file");
  r.expect_magic("EZC1");
  detail::check_version(r.u8(), "cipher file");
  CipherAudio cipher;
  cipher.sample_rate = r.u32();
  cipher.channels = r.u16();
  r.u16();  // reserved
  const std::uint64_t length = r.u64();
  cipher.block_size = r.u32();
  r.need_payload(length, 8);
  cipher.c.resize(static_cast<std::size_t>(length));
  for (auto& v : cipher.c) v = r.f64();
  if (report) report->trailing_bytes = r.remaining();
  return cipher;
}

inline std::vector<std::byte> encode_key(const EncryptionKey& key) {
  const auto& lc = key.lorenz;
  detail::Writer w(kKeyHeaderSize + 8 * key.k.size());
  w.tag("EZK1");
  w.u8(kVersion);
  w.f64(lc.params.sigma);
  w.f64(lc.params.rho);
  w.f64(lc.params.beta);
  w.f64(lc.params.dt);
  w.f64(lc.initial.x);
  w.f64(lc.initial.y);
  w.f64(lc.initial.z);
  w.f64(lc.scale);
  w.u32(lc.skip);
  w.u8(static_cast<std::uint8_t>(lc.component));
  w.f64(key.modulus);
  w.u32(key.block_size);
  w.u64(key.k.size());
  for (std::int64_t v : key.k) w.i64(v);
  return std::move(w).take();
}

inline EncryptionKey decode_key(std::span<const std::byte> bytes, ReadReport* report = nullptr) {
  detail::Reader r(bytes, "key file");
  r.expect_magic("EZK1");
  detail::check_version(r.u8(), "key file");
  EncryptionKey key;
  auto& lc = key.lorenz;
  lc.params.sigma = r.f64();
  lc.params.rho = r.f64();
  lc.params.beta = r.f64();
  lc.params.dt = r.f64();
  lc.initial.x = r.f64();
  lc.initial.y = r.f64();
  lc.initial.z = r.f64();
  lc.scale = r.f64();
  lc.skip = r.u32();
  const std::uint8_t component = r.u8();
  if (component > 2) {
    throw error(errc::format, "key file: component byte " + std::to_string(component) +
                                  " is not 0, 1 or 2");
  }
  lc.component = static_cast<lorenz::Component>(component);
  key.modulus = r.f64();
  key.block_size = r.u32();
  const std::uint64_t length = r.u64();
  r.need_payload(length, 8);
  key.k.resize(static_cast<std::size_t>(length));
  for (auto& v : key.k) v = r.i64();
  if (report) report->trailing_bytes = r.remaining();
  return key;
}

inline void write_cipher(const std::filesystem::path& path, const CipherAudio& cipher) {
  write_file_bytes(path, encode_cipher(cipher));
}

inline CipherAudio read_cipher(const std::filesystem::path& path, ReadReport* report = nullptr) {
  return decode_cipher(read_file_bytes(path), report);
}

inline void write_key(const std::filesystem::path& path, const EncryptionKey& key) {
  write_file_bytes(path, encode_key(key));
}

inline EncryptionKey read_key(const std::filesystem::path& path, ReadReport* report = nullptr) {
  return decode_key(read_file_bytes(path), report);
}

}  // namespace ezaudio::keyfile
