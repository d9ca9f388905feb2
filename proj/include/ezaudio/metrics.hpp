#pragma once

// Statistical evaluation of plain, encrypted and decrypted signals.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ezaudio/error.hpp"
#include "ezaudio/fft.hpp"

namespace ezaudio::metrics {

inline constexpr std::size_t kDefaultEntropyBins = 65536;
inline constexpr std::size_t kDefaultWindow = 1024;
inline constexpr std::size_t kDefaultHop = 512;

namespace detail {

inline void check_same_length(std::span<const double> x, std::span<const double> y, const char* what) {
  if (x.size() != y.size()) {
    throw error(errc::length_mismatch, std::string(what) + ": sequences have lengths " +
                                           std::to_string(x.size()) + " and " +
                                           std::to_string(y.size()));
  }
}

inline double mean(std::span<const double> x) noexcept {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

}  // namespace detail

/// Pearson correlation with population (1/N) moments:
/// cov(X, Y) / (sqrt(D(X)) sqrt(D(Y))).
inline double correlation(std::span<const double> x, std::span<const double> y) {
  detail::check_same_length(x, y, "correlation");
  if (x.size() < 2) throw error(errc::invalid_parameter, "correlation needs at least 2 samples");
  const double n = static_cast<double>(x.size());
  const double mx = detail::mean(x);
  const double my = detail::mean(y);
  double cov = 0.0, dx = 0.0, dy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = x[i] - mx;
    const double b = y[i] - my;
    cov += a * b;
    dx += a * a;
    dy += b * b;
  }
  cov /= n;
  dx /= n;
  dy /= n;
  if (!(dx > 0.0) || !(dy > 0.0)) {
    throw error(errc::undefined_correlation, "a sequence has zero variance");
  }
  return std::clamp(cov / (std::sqrt(dx) * std::sqrt(dy)), -1.0, 1.0);
}

/// Correlation of x with itself shifted by `lag` samples.
inline double lag_correlation(std::span<const double> x, std::size_t lag) {
  if (x.size() <= lag + 1) {
    throw error(errc::invalid_parameter, "lag " + std::to_string(lag) + " needs more than " +
                                             std::to_string(lag + 1) + " samples");
  }
  const std::size_t len = x.size() - lag;
  return correlation(x.first(len), x.subspan(lag, len));
}

inline double mse(std::span<const double> x, std::span<const double> y) {
  detail::check_same_length(x, y, "mse");
  if (x.empty()) throw error(errc::invalid_parameter, "mse needs at least 1 sample");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s / static_cast<double>(x.size());
}

/// 10 log10(Max^2 / MSE) where Max is the peak |x| of the original (first
/// argument). +inf when the sequences are identical.
inline double psnr(std::span<const double> x, std::span<const double> y) {
  const double e = mse(x, y);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::fabs(v));
  if (peak == 0.0) throw error(errc::undefined_psnr, "original is all zero so Max is 0");
  return 10.0 * std::log10(peak * peak / e);
}

struct Histogram {
  std::vector<double> bin_edges;  // bins + 1, ascending
  std::vector<std::uint64_t> counts;
};

/// Equal-width bins over [min, max]; bins are right-exclusive except the last,
/// which includes max. A constant sequence gets edges [v - 0.5, v + 0.5].
/// Non-finite samples are not counted.
inline Histogram histogram(std::span<const double> x, std::size_t bins) {
  if (bins < 1) throw error(errc::invalid_parameter, "histogram needs at least 1 bin");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : x) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  Histogram h;
  h.counts.assign(bins, 0);
  if (lo > hi) {  // no finite samples
    lo = 0.0;
    hi = 1.0;
  } else if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double range = hi - lo;
  h.bin_edges.resize(bins + 1);
  for (std::size_t i = 0; i < bins; ++i) {
    h.bin_edges[i] = lo + range * static_cast<double>(i) / static_cast<double>(bins);
  }
  h.bin_edges[bins] = hi;

  const double nbins = static_cast<double>(bins);
  for (double v : x) {
    if (!std::isfinite(v)) continue;
    const double pos = (v - lo) / range * nbins;
    const auto idx = std::min(static_cast<std::size_t>(std::max(pos, 0.0)), bins - 1);
    ++h.counts[idx];
  }
  return h;
}

/// Shannon entropy in bits of the equal-width histogram of x.
inline double entropy(std::span<const double> x, std::size_t bins = kDefaultEntropyBins) {
  if (x.empty()) throw error(errc::invalid_parameter, "entropy needs at least 1 sample");
  if (bins < 1) throw error(errc::invalid_parameter, "entropy needs at least 1 bin");
  const Histogram h = histogram(x, bins);
  std::uint64_t total = 0;
  for (auto c : h.counts) total += c;
  if (total == 0) return 0.0;
  double bits = 0.0;
  for (auto c : h.counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    bits -= p * std::log2(p);
  }
  return std::max(bits, 0.0);
}

// ---------------------------------------------------------------------------
// Spectrogram

enum class Window { Hann, Rectangular };

/// Periodic window of the given length.
inline std::vector<double> make_window(Window kind, std::size_t len) {
  std::vector<double> w(len, 1.0);
  if (kind == Window::Hann) {
    for (std::size_t i = 0; i < len; ++i) {
      w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                   static_cast<double>(len)));
    }
  }
  return w;
}

struct Spectrogram {
  std::size_t frames = 0;
  std::size_t bins = 0;               // window_len / 2 + 1
  std::vector<double> magnitudes;     // frames x bins, row-major
  std::size_t frame_hop = kDefaultHop;
  std::size_t window_len = kDefaultWindow;
  double sample_rate = 0.0;

  double at(std::size_t frame, std::size_t bin) const { return magnitudes[frame * bins + bin]; }
  double frame_time(std::size_t frame) const {
    return static_cast<double>(frame * frame_hop) / sample_rate;
  }
  double bin_frequency(std::size_t bin) const {
    return static_cast<double>(bin) * sample_rate / static_cast<double>(window_len);
  }
};

inline Spectrogram spectrogram(std::span<const double> x, std::size_t window_len = kDefaultWindow,
                               std::size_t hop = kDefaultHop, double sample_rate = 44100.0,
                               Window window = Window::Hann) {
  if (window_len < 16 || !fft::is_power_of_two(window_len)) {
    throw error(errc::invalid_parameter, "window length must be a power of two >= 16, got " +
                                             std::to_string(window_len));
  }
  if (hop < 1 || hop > window_len) {
    throw error(errc::invalid_parameter, "hop must be in [1, window], got " + std::to_string(hop));
  }
  if (x.size() < window_len) {
    throw error(errc::invalid_parameter, "signal of " + std::to_string(x.size()) +
                                             " samples is shorter than the window");
  }
  if (!(sample_rate > 0.0)) throw error(errc::invalid_parameter, "sample rate must be positive");

  Spectrogram sg;
  sg.window_len = window_len;
  sg.frame_hop = hop;
  sg.sample_rate = sample_rate;
  sg.bins = window_len / 2 + 1;
  sg.frames = (x.size() - window_len) / hop + 1;
  sg.magnitudes.resize(sg.frames * sg.bins);

  const std::vector<double> w = make_window(window, window_len);
  std::vector<std::complex<double>> buf(window_len);
  for (std::size_t f = 0; f < sg.frames; ++f) {
    const std::size_t start = f * hop;
    for (std::size_t i = 0; i < window_len; ++i) buf[i] = {x[start + i] * w[i], 0.0};
    fft::forward(buf);
    for (std::size_t b = 0; b < sg.bins; ++b) sg.magnitudes[f * sg.bins + b] = std::abs(buf[b]);
  }
  return sg;
}

// ---------------------------------------------------------------------------
// Report

struct Report {
  std::optional<double> rho;  // correlation(reference, subject)
  double rho_lag1 = 0.0;      // of the subject
  std::optional<double> mse;
  std::optional<double> psnr_db;
  double entropy_bits = 0.0;  // of the subject
};

struct ReportOptions {
  std::size_t bins = kDefaultEntropyBins;
  std::size_t lag = 1;
};

/// Single-signal metrics.
inline Report analyze(std::span<const double> subject, const ReportOptions& opts = {}) {
  Report r;
  r.rho_lag1 = lag_correlation(subject, opts.lag);
  r.entropy_bits = entropy(subject, opts.bins);
  return r;
}

/// Pair metrics of subject against the reference (original) signal.
inline Report analyze(std::span<const double> reference, std::span<const double> subject,
                      const ReportOptions& opts = {}) {
  detail::check_same_length(reference, subject, "analyze");
  Report r = analyze(subject, opts);
  r.rho = correlation(reference, subject);
  r.mse = mse(reference, subject);
  r.psnr_db = psnr(reference, subject);
  return r;
}

}  // namespace ezaudio::metrics
