#include <catch_amalgamated.hpp>

#include "ezaudio/audio_io.hpp"
#include "ezaudio/fixtures.hpp"
#include "ezaudio/metrics.hpp"

using namespace ezaudio;

TEST_CASE("fixtures are deterministic and on the PCM16 grid", "[fixtures]") {
  const auto a = fixtures::all();
  const auto b = fixtures::all();
  REQUIRE(a.size() == 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    INFO(a[i].name);
    CHECK(a[i].signal == b[i].signal);
    CHECK(a[i].signal.samples.size() == fixtures::kDefaultLength);
    CHECK(a[i].signal.sample_rate == fixtures::kSampleRate);
    CHECK(wav::decode(wav::encode(a[i].signal)) == a[i].signal);
    for (double v : a[i].signal.samples) REQUIRE(std::fabs(v) <= 1.0);
  }
}

TEST_CASE("fixtures have strong adjacent-sample correlation", "[fixtures]") {
  for (const auto& f : fixtures::all()) {
    INFO(f.name);
    CHECK(metrics::lag_correlation(f.signal.samples, 1) >= 0.8);
  }
}

TEST_CASE("speech-like fixture depends on the seed", "[fixtures]") {
  CHECK(fixtures::speech_like(4000, 1) != fixtures::speech_like(4000, 2));
  CHECK(fixtures::speech_like(4000, 1) == fixtures::speech_like(4000, 1));
}
