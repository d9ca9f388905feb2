#pragma once

// Deterministic synthetic test signals: a pure tone, a linear chirp and a
// noise-modulated harmonic signal with a speech-like envelope. All are
// quantised to the PCM16 grid so they survive a WAV round-trip unchanged.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ezaudio/audio_io.hpp"

namespace ezaudio::fixtures {

inline constexpr std::uint32_t kSampleRate = 44100;
inline constexpr std::size_t kDefaultLength = 100000;
inline constexpr std::uint64_t kDefaultSeed = 20240917;

namespace detail {

inline AudioSignal quantized(std::vector<double> samples) {
  for (double& v : samples) v = wav::dequantize_pcm16(wav::quantize_pcm16(v));
  return AudioSignal{std::move(samples), kSampleRate, 1, SampleFormat::PCM16};
}

// Uniform in [-1, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
inline double uniform_pm1(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

// White noise through a one-pole low-pass, rescaled to unit peak.
inline std::vector<double> smooth_noise(std::mt19937_64& rng, std::size_t n, double cutoff_hz) {
  const double a = std::exp(-2.0 * std::numbers::pi * cutoff_hz / kSampleRate);
  std::vector<double> out(n);
  double state = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    state = a * state + (1.0 - a) * uniform_pm1(rng);
    out[i] = state;
    peak = std::max(peak, std::fabs(state));
  }
  if (peak > 0.0) {
    for (double& v : out) v /= peak;
  }
  return out;
}

}  // namespace detail

inline AudioSignal sine(std::size_t length = kDefaultLength, double freq_hz = 440.0,
                        double amplitude = 0.5) {
  std::vector<double> s(length);
  for (std::size_t i = 0; i < length; ++i) {
    s[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * static_cast<double>(i) / kSampleRate);
  }
  return detail::quantized(std::move(s));
}

/// Linear sweep from f0 to f1 over the whole signal.
inline AudioSignal chirp(std::size_t length = kDefaultLength, double f0_hz = 100.0,
                         double f1_hz = 5000.0, double amplitude = 0.5) {
  std::vector<double> s(length);
  const double duration = static_cast<double>(length) / kSampleRate;
  const double rate = (f1_hz - f0_hz) / duration;
  for (std::size_t i = 0; i < length; ++i) {
    const double t = static_cast<double>(i) / kSampleRate;
    s[i] = amplitude * std::sin(2.0 * std::numbers::pi * (f0_hz * t + 0.5 * rate * t * t));
  }
  return detail::quantized(std::move(s));
}

/// Harmonic series on a jittered ~120 Hz fundamental, shaped by three formant
/// bumps, gated by a slow random syllable envelope, plus low-passed breath noise.
inline AudioSignal speech_like(std::size_t length = kDefaultLength,
                               std::uint64_t seed = kDefaultSeed) {
  std::mt19937_64 rng(seed);
  const auto pitch = detail::smooth_noise(rng, length, 3.0);
  const auto envelope = detail::smooth_noise(rng, length, 4.0);
  const auto breath = detail::smooth_noise(rng, length, 2000.0);

  constexpr double formants[3] = {500.0, 1500.0, 2500.0};
  constexpr double widths[3] = {150.0, 250.0, 300.0};
  auto formant_gain = [&](double f) {
    double g = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double d = (f - formants[k]) / widths[k];
      g += std::exp(-0.5 * d * d) / (k + 1);
    }
    return g;
  };

  std::vector<double> s(length);
  double phase = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < length; ++i) {
    const double f0 = 120.0 + 25.0 * pitch[i];
    phase += 2.0 * std::numbers::pi * f0 / kSampleRate;
    double voiced = 0.0;
    for (int h = 1; h * f0 < 4000.0; ++h) voiced += formant_gain(h * f0) * std::sin(h * phase);
    const double gate = std::max(0.0, 0.3 + envelope[i]);
    s[i] = gate * voiced + 0.05 * breath[i];
    peak = std::max(peak, std::fabs(s[i]));
  }
  for (double& v : s) v *= 0.6 / peak;
  return detail::quantized(std::move(s));
}

struct Named {
  std::string name;
  AudioSignal signal;
};

inline std::vector<Named> all(std::size_t length = kDefaultLength, std::uint64_t seed = kDefaultSeed) {
  return {{"sine", sine(length)}, {"chirp", chirp(length)}, {"speech", speech_like(length, seed)}};
}

}  // namespace ezaudio::fixtures
