#pragma once

// Lorenz system integrated with explicit forward Euler.
//
//   x' = sigma (y - x)
//   y' = x (rho - z) - y
//   z' = x y - beta z
//
// The integrator is part of the key contract: both ends of the cipher must
// produce bit-identical keystreams, so the step is always a single forward
// Euler update in binary64 without fused multiply-add.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "ezaudio/error.hpp"

namespace ezaudio::lorenz {

struct Params {
  double sigma = 10.0;
  double rho = 28.0;
  double beta = 8.0 / 3.0;
  double dt = 0.01;

  friend bool operator==(const Params&, const Params&) = default;
};

struct State {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool finite() const noexcept {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }

  friend bool operator==(const State&, const State&) = default;
};

inline constexpr State kDefaultInitial{0.02, 0.02, 0.02};

enum class Component : std::uint8_t { X = 0, Y = 1, Z = 2 };

struct Config {
  Params params{};
  State initial = kDefaultInitial;
  Component component = Component::X;
  std::uint32_t skip = 0;  // states discarded before the keystream begins
  double scale = 1.0;      // applied to the selected component last

  friend bool operator==(const Config&, const Config&) = default;
};

inline double select(const State& s, Component c) noexcept {
  switch (c) {
    case Component::X: return s.x;
    case Component::Y: return s.y;
    case Component::Z: return s.z;
  }
  return s.x;
}

inline void validate(const Params& p) {
  if (!(std::isfinite(p.sigma) && std::isfinite(p.rho) && std::isfinite(p.beta) &&
        std::isfinite(p.dt))) {
    throw error(errc::invalid_parameter, "lorenz parameters must be finite");
  }
  if (!(p.dt > 0.0)) {
    throw error(errc::invalid_parameter, "lorenz dt must be positive, got " + std::to_string(p.dt));
  }
}

inline void validate(const Config& c) {
  validate(c.params);
  if (!c.initial.finite()) {
    throw error(errc::invalid_parameter, "lorenz initial condition must be finite");
  }
  if (!std::isfinite(c.scale)) {
    throw error(errc::invalid_parameter, "keystream scale must be finite");
  }
  if (static_cast<std::uint8_t>(c.component) > 2) {
    throw error(errc::invalid_parameter, "lorenz component must be x, y or z");
  }
}

namespace detail {

inline State step_unchecked(const State& s, const Params& p) noexcept {
  const double dx = p.sigma * (s.y - s.x);
  const double dy = s.x * (p.rho - s.z) - s.y;
  const double dz = s.x * s.y - p.beta * s.z;
  return State{s.x + p.dt * dx, s.y + p.dt * dy, s.z + p.dt * dz};
}

inline State step_checked(const State& s, const Params& p, std::uint64_t step_index) {
  State next = step_unchecked(s, p);
  if (!next.finite()) {
    throw error(errc::integration_overflow,
                "lorenz state became non-finite at step " + std::to_string(step_index));
  }
  return next;
}

}  // namespace detail

/// One explicit Euler step: state + dt * f(state).
inline State euler_step(const State& state, const Params& params) {
  return detail::step_checked(state, params, 1);
}

/// Trajectory of steps + 1 states, starting with config.initial.
inline std::vector<State> simulate(const Config& config, std::size_t steps) {
  validate(config);
  std::vector<State> out;
  out.reserve(steps + 1);
  out.push_back(config.initial);
  State s = config.initial;
  for (std::size_t i = 1; i <= steps; ++i) {
    s = detail::step_checked(s, config.params, i);
    out.push_back(s);
  }
  return out;
}

/// Trajectory states after the skip, i.e. states skip .. skip+length-1.
/// Element 0 is the initial condition when skip is zero. Components are not
/// scaled.
inline std::vector<State> trajectory_window(const Config& config, std::size_t length) {
  validate(config);
  std::vector<State> out;
  out.reserve(length);
  if (length == 0) return out;
  State s = config.initial;
  std::uint64_t index = 0;
  for (; index < config.skip; ++index) s = detail::step_checked(s, config.params, index + 1);
  out.push_back(s);
  for (std::size_t i = 1; i < length; ++i) {
    s = detail::step_checked(s, config.params, ++index);
    out.push_back(s);
  }
  return out;
}

/// scale * selected component of the post-skip states.
inline std::vector<double> keystream(const Config& config, std::size_t length) {
  validate(config);
  std::vector<double> out;
  out.reserve(length);
  if (length == 0) return out;
  State s = config.initial;
  std::uint64_t index = 0;
  for (; index < config.skip; ++index) s = detail::step_checked(s, config.params, index + 1);
  out.push_back(config.scale * select(s, config.component));
  for (std::size_t i = 1; i < length; ++i) {
    s = detail::step_checked(s, config.params, ++index);
    out.push_back(config.scale * select(s, config.component));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bifurcation scans

enum class SweepParam { Sigma, Rho, Beta };

struct BifurcationPoint {
  double param = 0.0;
  std::vector<double> maxima;  // z at strict local maxima of the recorded window
  bool diverged = false;
  std::string failure;  // set when diverged
};

struct BifurcationOptions {
  std::size_t transient = 5000;
  std::size_t record = 20000;
  State initial = kDefaultInitial;
  unsigned threads = 1;
};

inline Params with_sweep(Params p, SweepParam which, double value) noexcept {
  switch (which) {
    case SweepParam::Sigma: p.sigma = value; break;
    case SweepParam::Rho: p.rho = value; break;
    case SweepParam::Beta: p.beta = value; break;
  }
  return p;
}

/// z-maxima of one parameter combination. Divergence is reported in the
/// returned point rather than thrown.
inline BifurcationPoint z_maxima(const Params& params, double param_value,
                                 const BifurcationOptions& opts) {
  BifurcationPoint point;
  point.param = param_value;
  try {
    validate(params);
    State s = opts.initial;
    std::uint64_t index = 0;
    for (; index < opts.transient; ++index) s = detail::step_checked(s, params, index + 1);
    if (opts.record < 3) return point;
    // Sliding window over the recorded z values.
    s = detail::step_checked(s, params, ++index);
    double prev = s.z;
    s = detail::step_checked(s, params, ++index);
    double cur = s.z;
    for (std::size_t i = 2; i < opts.record; ++i) {
      s = detail::step_checked(s, params, ++index);
      const double next = s.z;
      if (prev < cur && cur > next) point.maxima.push_back(cur);
      prev = cur;
      cur = next;
    }
  } catch (const error& e) {
    point.maxima.clear();
    point.diverged = true;
    point.failure = e.what();
  }
  return point;
}

/// Sweeps one parameter over `grid` evenly spaced values in [lo, hi] and
/// records the z-maxima of each post-transient trajectory. The result is
/// independent of opts.threads.
inline std::vector<BifurcationPoint> bifurcation_scan(SweepParam sweep, double lo, double hi,
                                                      std::size_t grid, const Params& fixed,
                                                      const BifurcationOptions& opts = {}) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
    throw error(errc::invalid_parameter, "bifurcation range requires finite lo < hi");
  }
  if (grid < 2) {
    throw error(errc::invalid_parameter, "bifurcation grid must have at least 2 points");
  }
  if (!opts.initial.finite()) {
    throw error(errc::invalid_parameter, "bifurcation initial condition must be finite");
  }

  std::vector<BifurcationPoint> out(grid);
  const double span = hi - lo;
  auto value_at = [&](std::size_t i) {
    return i + 1 == grid ? hi : lo + span * static_cast<double>(i) / static_cast<double>(grid - 1);
  };
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < grid; i += stride) {
      const double v = value_at(i);
      out[i] = z_maxima(with_sweep(fixed, sweep, v), v, opts);
    }
  };

  const std::size_t nthreads = std::clamp<std::size_t>(opts.threads, 1, grid);
  if (nthreads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(work, t, nthreads);
  }
  return out;
}

}  // namespace ezaudio::lorenz
