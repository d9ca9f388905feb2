#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ezaudio {

enum class errc {
  integration_overflow = 1,
  invalid_modulus,
  empty_input,
  invalid_sample,
  key_mismatch,
  malformed_wav,
  unsupported_format,
  io,
  format,
  length_mismatch,
  undefined_correlation,
  undefined_psnr,
  invalid_parameter,
  oracle_failure,
};

constexpr std::string_view to_string(errc code) noexcept {
  switch (code) {
    case errc::integration_overflow: return "integration-overflow";
    case errc::invalid_modulus: return "invalid-modulus";
    case errc::empty_input: return "empty-input";
    case errc::invalid_sample: return "invalid-sample";
    case errc::key_mismatch: return "key-mismatch";
    case errc::malformed_wav: return "malformed-wav";
    case errc::unsupported_format: return "unsupported-format";
    case errc::io: return "io";
    case errc::format: return "format";
    case errc::length_mismatch: return "length-mismatch";
    case errc::undefined_correlation: return "undefined-correlation";
    case errc::undefined_psnr: return "undefined-psnr";
    case errc::invalid_parameter: return "invalid-parameter";
    case errc::oracle_failure: return "oracle-failure";
  }
  return "unknown";
}

/// Every failure raised by the library. The code is stable and is what the
/// command-line tool maps to its exit status.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace ezaudio
