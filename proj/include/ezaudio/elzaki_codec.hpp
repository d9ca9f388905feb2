#pragma once

// Elzaki-domain coefficient substitution.
//
// Samples y_n are treated as the coefficients of y t^2 e^t = sum y_n t^(n+2) / n!.
// The Elzaki transform maps t^(n+2)/n! to (n+1)(n+2) s^(n+4), so the transform
// acts on each coefficient as a multiplication by (n+1)(n+2). The series
// variables never materialise: encryption is y -> q = (n+1)(n+2) y followed by
// reduction of q modulo N, and decryption is the exact inverse.
//
// The index n restarts every block_size samples so the multiplier stays small
// enough for binary64 round-trips.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ezaudio/error.hpp"
#include "ezaudio/lorenz.hpp"

namespace ezaudio {

inline constexpr std::uint32_t kDefaultBlockSize = 65536;
inline constexpr std::uint32_t kMaxBlockSize = std::uint32_t{1} << 26;
inline constexpr double kSilenceThreshold = 1e-12;

struct CipherAudio {
  std::vector<double> c;  // residues in [0, N)
  std::uint32_t block_size = kDefaultBlockSize;
  std::uint32_t sample_rate = 0;
  std::uint16_t channels = 1;

  std::size_t length() const noexcept { return c.size(); }

  friend bool operator==(const CipherAudio&, const CipherAudio&) = default;
};

struct EncryptionKey {
  lorenz::Config lorenz{};
  double modulus = 1.0;        // N
  std::vector<std::int64_t> k;  // modular key, one quotient per sample
  std::uint32_t block_size = kDefaultBlockSize;

  std::size_t length() const noexcept { return k.size(); }

  friend bool operator==(const EncryptionKey&, const EncryptionKey&) = default;
};

struct Framing {
  std::uint32_t sample_rate = 0;
  std::uint16_t channels = 1;
};

struct Encrypted {
  CipherAudio cipher;
  EncryptionKey key;
};

/// (n + 1)(n + 2), the Elzaki image of t^(n+2)/n! divided by s^(n+4).
constexpr std::uint64_t elzaki_multiplier(std::uint64_t n) noexcept { return (n + 1) * (n + 2); }

struct Residue {
  double c = 0.0;
  std::int64_t k = 0;

  friend bool operator==(const Residue&, const Residue&) = default;
};

/// Floored real modular reduction: k = floor(q / N), c = q - N k, 0 <= c < N.
///
/// c + N*k reproduces q to within one ulp of max(|q|, N). For negative q with
/// |q| < N the residue N + q cannot carry more precision than N itself, and
/// below half an ulp of N the only representable residue is 0.
inline Residue real_mod(double q, double modulus) {
  if (!(modulus > 0.0) || !std::isfinite(modulus)) {
    throw error(errc::invalid_modulus, "modulus must be positive and finite, got " +
                                           std::to_string(modulus));
  }
  if (!std::isfinite(q)) throw error(errc::invalid_sample, "cannot reduce a non-finite value");

  const double quotient = std::floor(q / modulus);
  constexpr double kLimit = 9.2233720368547758e18;  // 2^63
  if (!(std::fabs(quotient) < kLimit)) {
    throw error(errc::invalid_parameter, "modular quotient does not fit a 64-bit key entry");
  }
  std::int64_t k = static_cast<std::int64_t>(quotient);
  double c = q - modulus * static_cast<double>(k);
  // q / N may round across an integer; walk k back into range.
  for (int attempt = 0; attempt < 2 && (c < 0.0 || c >= modulus); ++attempt) {
    k += c < 0.0 ? -1 : 1;
    c = q - modulus * static_cast<double>(k);
  }
  if (c >= modulus) {
    ++k;
    c = 0.0;
  } else if (c < 0.0) {
    c = 0.0;
  }
  return {c, k};
}

/// Inverse of real_mod: c + N k.
inline double real_unmod(double c, std::int64_t k, double modulus) noexcept {
  return c + modulus * static_cast<double>(k);
}

namespace detail {

inline void check_block_size(std::uint32_t block_size) {
  if (block_size < 1 || block_size > kMaxBlockSize) {
    throw error(errc::invalid_parameter, "block_size must be in [1, " +
                                             std::to_string(kMaxBlockSize) + "], got " +
                                             std::to_string(block_size));
  }
}

}  // namespace detail

/// y = x + keystream.
inline std::vector<double> pre_encode(std::span<const double> x, const lorenz::Config& config) {
  const auto ks = lorenz::keystream(config, x.size());
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + ks[i];
  return y;
}

/// max |y|, falling back to 1 for digital silence.
inline double modulus_for(std::span<const double> y) noexcept {
  double n = 0.0;
  for (double v : y) n = std::max(n, std::fabs(v));
  return n < kSilenceThreshold ? 1.0 : n;
}

inline Encrypted encrypt(std::span<const double> x, const lorenz::Config& config,
                         std::uint32_t block_size = kDefaultBlockSize, Framing framing = {}) {
  if (x.empty()) throw error(errc::empty_input, "cannot encrypt an empty signal");
  detail::check_block_size(block_size);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      throw error(errc::invalid_sample, "non-finite sample at index " + std::to_string(i));
    }
  }

  const std::vector<double> y = pre_encode(x, config);
  const double modulus = modulus_for(y);

  Encrypted out;
  out.cipher.block_size = block_size;
  out.cipher.sample_rate = framing.sample_rate;
  out.cipher.channels = framing.channels;
  out.cipher.c.resize(y.size());
  out.key.lorenz = config;
  out.key.modulus = modulus;
  out.key.block_size = block_size;
  out.key.k.resize(y.size());

  for (std::size_t n = 0; n < y.size(); ++n) {
    const auto j = static_cast<std::uint64_t>(n % block_size);
    const double q = static_cast<double>(elzaki_multiplier(j)) * y[n];
    const Residue r = real_mod(q, modulus);
    out.cipher.c[n] = r.c;
    out.key.k[n] = r.k;
  }
  return out;
}

inline std::vector<double> decrypt(const CipherAudio& cipher, const EncryptionKey& key) {
  if (cipher.length() != key.length()) {
    throw error(errc::key_mismatch, "cipher has " + std::to_string(cipher.length()) +
                                        " samples but key has " + std::to_string(key.length()));
  }
  if (cipher.block_size != key.block_size) {
    throw error(errc::key_mismatch, "cipher block_size " + std::to_string(cipher.block_size) +
                                        " differs from key block_size " +
                                        std::to_string(key.block_size));
  }
  detail::check_block_size(key.block_size);
  if (!(key.modulus > 0.0) || !std::isfinite(key.modulus)) {
    throw error(errc::invalid_modulus, "key modulus must be positive and finite, got " +
                                           std::to_string(key.modulus));
  }

  const auto ks = lorenz::keystream(key.lorenz, cipher.length());
  std::vector<double> x(cipher.length());
  for (std::size_t n = 0; n < x.size(); ++n) {
    const auto j = static_cast<std::uint64_t>(n % key.block_size);
    const double q = real_unmod(cipher.c[n], key.k[n], key.modulus);
    const double y = q / static_cast<double>(elzaki_multiplier(j));
    x[n] = y - ks[n];
  }
  return x;
}

}  // namespace ezaudio
