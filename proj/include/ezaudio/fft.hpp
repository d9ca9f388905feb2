#pragma once

// In-place iterative radix-2 Cooley-Tukey FFT.

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>

#include "ezaudio/error.hpp"

namespace ezaudio::fft {

constexpr bool is_power_of_two(std::size_t n) noexcept { return std::has_single_bit(n); }

/// Forward transform, X[k] = sum_n x[n] exp(-2 pi i k n / N). No scaling.
inline void forward(std::span<std::complex<double>> data) {
  const std::size_t n = data.size();
  if (!is_power_of_two(n)) {
    throw error(errc::invalid_parameter, "fft length must be a power of two, got " + std::to_string(n));
  }
  if (n == 1) return;

  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const double theta = -2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t k = 0; k < half; ++k) {
      // Twiddles computed directly rather than by recurrence to keep error flat.
      const std::complex<double> w(std::cos(theta * static_cast<double>(k)),
                                   std::sin(theta * static_cast<double>(k)));
      for (std::size_t start = 0; start < n; start += len) {
        const std::complex<double> u = data[start + k];
        const std::complex<double> v = data[start + k + half] * w;
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }
}

}  // namespace ezaudio::fft
