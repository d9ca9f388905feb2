#pragma once

// Numerical Elzaki transform of a monomial, used to check the closed-form
// coefficient multiplier against the defining integral
//
//   E[f](s) = s * integral_0^inf f(t) exp(-t/s) dt.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <string>

#include "ezaudio/error.hpp"

namespace ezaudio {

inline constexpr double kOracleRelTol = 1e-9;

/// E[t^m](s) by adaptive Gauss-Kronrod quadrature, truncated at t = 60 s (m+1).
/// Valid for 0 <= m <= 12 and 0 < s <= 1.
inline double elzaki_of_monomial_oracle(int m, double s) {
  if (m < 0 || m > 12) {
    throw error(errc::invalid_parameter, "oracle exponent must be in [0, 12], got " +
                                             std::to_string(m));
  }
  if (!(s > 0.0 && s <= 1.0)) {
    throw error(errc::invalid_parameter, "oracle s must be in (0, 1], got " + std::to_string(s));
  }
  const double upper = 60.0 * s * (m + 1);
  auto integrand = [m, s](double t) { return std::pow(t, m) * std::exp(-t / s); };

  double err_estimate = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, upper, 20, kOracleRelTol * 1e-3, &err_estimate);
  if (!std::isfinite(integral) || err_estimate > kOracleRelTol * std::fabs(integral)) {
    throw error(errc::oracle_failure, "quadrature did not converge for m=" + std::to_string(m) +
                                          " (error estimate " + std::to_string(err_estimate) +
                                          ")");
  }
  return s * integral;
}

}  // namespace ezaudio
