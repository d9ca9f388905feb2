#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "ezaudio/elzaki_codec.hpp"
#include "ezaudio/elzaki_oracle.hpp"
#include "ezaudio/fixtures.hpp"
#include "ezaudio/metrics.hpp"

using namespace ezaudio;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

lorenz::Config silent_key() {
  lorenz::Config cfg;
  cfg.scale = 0.0;
  return cfg;
}

double max_abs_error(const std::vector<double>& a, std::span<const double> b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::fabs(a[i] - b[i]));
  return e;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::vector<double> random_signal(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = u(rng);
  return x;
}

}  // namespace

TEST_CASE("elzaki_multiplier is (n+1)(n+2)", "[elzaki]") {
  CHECK(elzaki_multiplier(0) == 2);
  CHECK(elzaki_multiplier(1) == 6);
  CHECK(elzaki_multiplier(9) == 110);
  for (std::uint64_t n = 0; n < 1000; ++n) CHECK(elzaki_multiplier(n) == n * n + 3 * n + 2);
  CHECK(elzaki_multiplier(kMaxBlockSize - 1) ==
        std::uint64_t{kMaxBlockSize} * (std::uint64_t{kMaxBlockSize} + 1));
}

TEST_CASE("quadrature oracle reproduces E[t^m] = m! s^(m+2)", "[elzaki][oracle]") {
  CHECK_THAT(elzaki_of_monomial_oracle(0, 0.5), WithinRel(0.25, 1e-9));
  CHECK_THAT(elzaki_of_monomial_oracle(2, 0.5), WithinRel(2.0 * std::pow(0.5, 4), 1e-6));
  CHECK_THAT(elzaki_of_monomial_oracle(5, 0.3), WithinRel(120.0 * std::pow(0.3, 7), 1e-6));
  CHECK_THAT(elzaki_of_monomial_oracle(5, 0.3), WithinAbs(0.0262440, 1e-7));
  for (int m = 0; m <= 12; ++m) {
    for (double s : {0.1, 0.3, 0.5, 1.0}) {
      INFO("m=" << m << " s=" << s);
      CHECK_THAT(elzaki_of_monomial_oracle(m, s), WithinRel(factorial(m) * std::pow(s, m + 2), 1e-8));
    }
  }
}

TEST_CASE("multiplier law agrees with the transform integral", "[elzaki][oracle]") {
  for (int n = 0; n <= 8; ++n) {
    for (double s : {0.3, 0.5}) {
      const double implied = elzaki_of_monomial_oracle(n + 2, s) / (factorial(n) * std::pow(s, n + 4));
      INFO("n=" << n << " s=" << s);
      CHECK_THAT(implied, WithinRel(static_cast<double>(elzaki_multiplier(n)), 1e-6));
    }
  }
  // The variant (2n+1) multiplier is inconsistent with the integral.
  const double implied3 = elzaki_of_monomial_oracle(5, 0.5) / (factorial(3) * std::pow(0.5, 7));
  CHECK(std::fabs(implied3 - 7.0) > 1.0);
}

TEST_CASE("oracle preconditions", "[elzaki][oracle]") {
  CHECK_THROWS_AS(elzaki_of_monomial_oracle(-1, 0.5), error);
  CHECK_THROWS_AS(elzaki_of_monomial_oracle(13, 0.5), error);
  CHECK_THROWS_AS(elzaki_of_monomial_oracle(2, 0.0), error);
  CHECK_THROWS_AS(elzaki_of_monomial_oracle(2, 1.5), error);
}

TEST_CASE("real_mod examples", "[elzaki][mod]") {
  CHECK(real_mod(2.0, 1.0) == Residue{0.0, 2});
  CHECK(real_mod(-1.5, 0.5) == Residue{0.0, -3});
  CHECK(real_mod(7.25, 2.0) == Residue{1.25, 3});
  CHECK(real_mod(-0.25, 1.0) == Residue{0.75, -1});
  CHECK(real_mod(0.0, 3.0) == Residue{0.0, 0});
}

TEST_CASE("real_mod rejects bad moduli", "[elzaki][mod]") {
  for (double n : {0.0, -1.0, std::nan(""), std::numeric_limits<double>::infinity()}) {
    try {
      real_mod(1.0, n);
      FAIL("expected invalid modulus");
    } catch (const error& e) {
      CHECK(e.code() == errc::invalid_modulus);
    }
  }
}

TEST_CASE("real_mod identity: 0 <= c < N and c + N k == q within 1 ulp of max(|q|, N)", "[elzaki][mod][property]") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> expo(-6.0, 10.0);
  std::uniform_real_distribution<double> nexp(-3.0, 2.0);
  for (int i = 0; i < 200000; ++i) {
    const double q = unit(rng) * std::pow(10.0, expo(rng));
    const double n = std::pow(10.0, nexp(rng));
    const Residue r = real_mod(q, n);
    REQUIRE(r.c >= 0.0);
    REQUIRE(r.c < n);
    const double back = real_unmod(r.c, r.k, n);
    const double scale = std::max(std::fabs(q), n);
    const double ulp = std::nextafter(scale, INFINITY) - scale;
    INFO("q=" << q << " N=" << n);
    REQUIRE(std::fabs(back - q) <= ulp);
  }
}

TEST_CASE("encrypt hand examples", "[elzaki][encrypt]") {
  const auto one = encrypt(std::vector<double>{1.0}, silent_key());
  CHECK(one.key.modulus == 1.0);
  CHECK(one.cipher.c == std::vector<double>{0.0});
  CHECK(one.key.k == std::vector<std::int64_t>{2});

  const auto two = encrypt(std::vector<double>{0.5, -0.25}, silent_key());
  CHECK(two.key.modulus == 0.5);
  CHECK(two.cipher.c == std::vector<double>{0.0, 0.0});
  CHECK(two.key.k == std::vector<std::int64_t>{2, -3});
  CHECK(two.cipher.block_size == kDefaultBlockSize);
  CHECK(two.key.block_size == kDefaultBlockSize);
}

TEST_CASE("decrypt hand examples", "[elzaki][decrypt]") {
  EncryptionKey key;
  key.lorenz = silent_key();
  key.modulus = 1.0;
  key.k = {2};
  CipherAudio cipher;
  cipher.c = {0.0};
  CHECK(decrypt(cipher, key) == std::vector<double>{1.0});

  key.modulus = 0.5;
  key.k = {2, -3};
  cipher.c = {0.0, 0.0};
  CHECK(decrypt(cipher, key) == std::vector<double>{0.5, -0.25});
}

TEST_CASE("round trip of a 1000-sample sine with the default key", "[elzaki][roundtrip]") {
  std::vector<double> x(1000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.8 * std::sin(2.0 * std::numbers::pi * 440.0 * i / 44100.0);
  const auto enc = encrypt(x, lorenz::Config{});
  CHECK(max_abs_error(decrypt(enc.cipher, enc.key), x) <= 1e-9);
}

TEST_CASE("round trip property over lengths, block sizes and components", "[elzaki][roundtrip][property]") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> len(1, 5000);
  std::uniform_int_distribution<std::uint32_t> block(1, 4096);
  for (int trial = 0; trial < 60; ++trial) {
    const auto x = random_signal(rng, len(rng));
    lorenz::Config cfg;
    cfg.component = static_cast<lorenz::Component>(trial % 3);
    cfg.skip = static_cast<std::uint32_t>(trial * 13);
    cfg.scale = trial % 5 == 0 ? 0.0 : 1.0 / (1 + trial % 4);
    const std::uint32_t bs = trial % 2 == 0 ? kDefaultBlockSize : block(rng);
    const auto enc = encrypt(x, cfg, bs);
    for (std::size_t n = 0; n < x.size(); ++n) {
      REQUIRE(enc.cipher.c[n] >= 0.0);
      REQUIRE(enc.cipher.c[n] < enc.key.modulus);
    }
    INFO("trial " << trial << " len " << x.size() << " block " << bs);
    REQUIRE(max_abs_error(decrypt(enc.cipher, enc.key), x) <= 1e-9);
  }
}

TEST_CASE("round trip at 2^20 samples with the default block size", "[elzaki][roundtrip]") {
  std::mt19937_64 rng(99);
  const auto x = random_signal(rng, std::size_t{1} << 20);
  const auto enc = encrypt(x, lorenz::Config{});
  CHECK(max_abs_error(decrypt(enc.cipher, enc.key), x) <= 1e-9);
}

TEST_CASE("mod identity holds for every encrypted coefficient", "[elzaki][mod]") {
  const auto sig = fixtures::speech_like(20000);
  lorenz::Config cfg;
  cfg.component = lorenz::Component::Y;
  const std::uint32_t bs = 4096;
  const auto enc = encrypt(sig.samples, cfg, bs);
  const auto y = pre_encode(sig.samples, cfg);
  for (std::size_t n = 0; n < y.size(); ++n) {
    const double q = static_cast<double>(elzaki_multiplier(n % bs)) * y[n];
    const double back = real_unmod(enc.cipher.c[n], enc.key.k[n], enc.key.modulus);
    const double scale = std::max(std::fabs(q), enc.key.modulus);
    const double ulp = std::nextafter(scale, INFINITY) - scale;
    REQUIRE(std::fabs(back - q) <= ulp);
  }
}

TEST_CASE("modulus is the peak of the pre-encoded signal", "[elzaki][encrypt]") {
  const auto sig = fixtures::sine(5000);
  const lorenz::Config cfg{};
  const auto y = pre_encode(sig.samples, cfg);
  double peak = 0.0;
  for (double v : y) peak = std::max(peak, std::fabs(v));
  CHECK(encrypt(sig.samples, cfg).key.modulus == peak);
}

TEST_CASE("digital silence falls back to N = 1", "[elzaki][encrypt]") {
  const std::vector<double> zeros(777, 0.0);
  const auto enc = encrypt(zeros, silent_key());
  CHECK(enc.key.modulus == 1.0);
  for (double c : enc.cipher.c) CHECK(c == 0.0);
  for (auto k : enc.key.k) CHECK(k == 0);
  CHECK(decrypt(enc.cipher, enc.key) == zeros);
}

TEST_CASE("encrypt error paths", "[elzaki][encrypt]") {
  try {
    encrypt(std::vector<double>{}, lorenz::Config{});
    FAIL("expected empty input");
  } catch (const error& e) {
    CHECK(e.code() == errc::empty_input);
  }
  try {
    encrypt(std::vector<double>{0.1, 0.2, std::nan(""), 0.3}, lorenz::Config{});
    FAIL("expected invalid sample");
  } catch (const error& e) {
    CHECK(e.code() == errc::invalid_sample);
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("index 2"));
  }
  CHECK_THROWS_AS(encrypt(std::vector<double>{0.1}, lorenz::Config{}, 0), error);
  CHECK_THROWS_AS(encrypt(std::vector<double>{0.1}, lorenz::Config{}, kMaxBlockSize + 1), error);
}

TEST_CASE("decrypt error paths", "[elzaki][decrypt]") {
  const auto enc = encrypt(std::vector<double>{0.1, 0.2, 0.3}, lorenz::Config{});
  auto short_key = enc.key;
  short_key.k.pop_back();
  auto other_block = enc.cipher;
  other_block.block_size = 7;
  auto zero_mod = enc.key;
  zero_mod.modulus = 0.0;

  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const error& e) {
      return e.code();
    }
    return errc{};
  };
  CHECK(code_of([&] { decrypt(enc.cipher, short_key); }) == errc::key_mismatch);
  CHECK(code_of([&] { decrypt(other_block, enc.key); }) == errc::key_mismatch);
  CHECK(code_of([&] { decrypt(enc.cipher, zero_mod); }) == errc::invalid_modulus);
}

TEST_CASE("a slightly wrong initial condition fails to decrypt", "[elzaki][sensitivity]") {
  const auto sig = fixtures::speech_like(10000);
  const auto enc = encrypt(sig.samples, lorenz::Config{});
  auto wrong = enc.key;
  wrong.lorenz.initial.x += 1e-8;
  const auto out = decrypt(enc.cipher, wrong);
  CHECK(std::fabs(metrics::correlation(sig.samples, out)) < 0.1);
}

TEST_CASE("encryption is deterministic", "[elzaki]") {
  const auto sig = fixtures::chirp(3000);
  const auto a = encrypt(sig.samples, lorenz::Config{}, 1024);
  const auto b = encrypt(sig.samples, lorenz::Config{}, 1024);
  CHECK(a.cipher == b.cipher);
  CHECK(a.key == b.key);
}
