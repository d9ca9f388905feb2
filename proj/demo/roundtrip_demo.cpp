// Encrypts a synthetic tone in memory, decrypts it, and prints the headline
// metrics.

#include <cmath>
#include <cstdio>

#include "ezaudio/ezaudio.hpp"

int main() {
  using namespace ezaudio;

  const AudioSignal tone = fixtures::sine(44100);
  lorenz::Config key_config;  // sigma=10, rho=28, beta=8/3, dt=0.01, x0=y0=z0=0.02

  const Encrypted enc = encrypt(tone.samples, key_config);
  const std::vector<double> back = decrypt(enc.cipher, enc.key);

  double worst = 0.0;
  for (std::size_t i = 0; i < back.size(); ++i) worst = std::max(worst, std::fabs(back[i] - tone.samples[i]));

  std::printf("N                     %.6f\n", enc.key.modulus);
  std::printf("lag-1 rho plain       %.4f\n", metrics::lag_correlation(tone.samples, 1));
  std::printf("lag-1 rho cipher      %.4f\n", metrics::lag_correlation(enc.cipher.c, 1));
  std::printf("rho(plain, cipher)    %.4f\n", metrics::correlation(tone.samples, enc.cipher.c));
  std::printf("entropy plain/cipher  %.3f / %.3f bits\n", metrics::entropy(tone.samples),
              metrics::entropy(enc.cipher.c));
  std::printf("max round-trip error  %.3g\n", worst);
  return 0;
}
