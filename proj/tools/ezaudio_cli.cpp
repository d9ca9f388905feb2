// ezaudio: encrypt/decrypt WAV audio with the Lorenz + Elzaki cipher and
// produce the analysis artifacts used to evaluate it.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ezaudio/ezaudio.hpp"

namespace fs = std::filesystem;
using namespace ezaudio;

namespace {

constexpr int kExitOther = 2;

// Library error codes map to 10..23.
int exit_code_for(errc code) { return 9 + static_cast<int>(code); }

struct LorenzFlags {
  double sigma = 10.0, rho = 28.0, beta = 8.0 / 3.0, dt = 0.01;
  double x0 = 0.02, y0 = 0.02, z0 = 0.02;
  std::string component = "x";
  std::uint32_t skip = 0;
  double scale = 1.0;

  void attach(CLI::App* app) {
    app->add_option("--sigma", sigma, "Lorenz sigma")->capture_default_str();
    app->add_option("--rho", rho, "Lorenz rho")->capture_default_str();
    app->add_option("--beta", beta, "Lorenz beta")->capture_default_str();
    app->add_option("--dt", dt, "Euler time step")->capture_default_str();
    app->add_option("--x0", x0, "initial x")->capture_default_str();
    app->add_option("--y0", y0, "initial y")->capture_default_str();
    app->add_option("--z0", z0, "initial z")->capture_default_str();
    app->add_option("--component", component, "keystream component")
        ->check(CLI::IsMember({"x", "y", "z"}))
        ->capture_default_str();
    app->add_option("--skip", skip, "discarded initial states")->capture_default_str();
    app->add_option("--scale", scale, "keystream multiplier")->capture_default_str();
  }

  lorenz::Config config() const {
    lorenz::Config c;
    c.params = {sigma, rho, beta, dt};
    c.initial = {x0, y0, z0};
    c.component = component == "x"   ? lorenz::Component::X
                  : component == "y" ? lorenz::Component::Y
                                     : lorenz::Component::Z;
    c.skip = skip;
    c.scale = scale;
    return c;
  }
};

/// Tracks which pipeline stage is running so failures can name it.
struct Stage {
  std::string name = "startup";
  void operator()(std::string next) { name = std::move(next); }
};

template <class Fn>
int run_staged(Fn&& fn) {
  Stage stage;
  try {
    return fn(stage);
  } catch (const error& e) {
    std::cerr << "ezaudio: " << stage.name << " failed: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "ezaudio: " << stage.name << " failed: " << e.what() << "\n";
    return kExitOther;
  }
}

void warn_trailing(const keyfile::ReadReport& r, const fs::path& path) {
  if (r.trailing_bytes > 0) {
    std::cerr << "ezaudio: warning: ignored " << r.trailing_bytes << " trailing bytes in "
              << path.string() << "\n";
  }
}

struct LoadedSignal {
  std::vector<double> samples;
  double sample_rate = 44100.0;
};

bool has_magic(const fs::path& path, const char* magic) {
  std::ifstream in(path, std::ios::binary);
  char buf[4] = {};
  in.read(buf, 4);
  return in.gcount() == 4 && std::string(buf, 4) == magic;
}

/// A WAV file or the residues of a cipher file.
LoadedSignal load_signal(const fs::path& path) {
  if (has_magic(path, "EZC1")) {
    keyfile::ReadReport report;
    auto cipher = keyfile::read_cipher(path, &report);
    warn_trailing(report, path);
    return {std::move(cipher.c), cipher.sample_rate > 0 ? cipher.sample_rate : 44100.0};
  }
  auto sig = read_wav(path);
  return {std::move(sig.samples), static_cast<double>(sig.sample_rate)};
}

std::ofstream open_csv(const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw error(errc::io, "cannot open " + path.string() + " for writing");
  return out;
}

// ---------------------------------------------------------------------------

struct EncryptCmd {
  fs::path in, out, key;
  std::uint32_t block_size = kDefaultBlockSize;
  LorenzFlags lorenz;

  int run() {
    return run_staged([&](Stage& stage) {
      const auto start = std::chrono::steady_clock::now();
      stage("read input " + in.string());
      const AudioSignal sig = read_wav(in);
      stage("encrypt");
      const auto enc = encrypt(sig.samples, lorenz.config(), block_size,
                               Framing{sig.sample_rate, sig.channels});
      stage("write cipher " + out.string());
      keyfile::write_cipher(out, enc.cipher);
      stage("write key " + key.string());
      keyfile::write_key(key, enc.key);
      const auto elapsed = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();
      const std::size_t blocks = (sig.samples.size() + block_size - 1) / block_size;
      std::cout << "samples=" << sig.samples.size() << "\n"
                << "N=" << format_double(enc.key.modulus) << "\n"
                << "blocks=" << blocks << "\n"
                << "elapsed_ms=" << elapsed << "\n";
      return 0;
    });
  }
};

struct DecryptCmd {
  fs::path in, key, out, verify;
  std::string format = "pcm16";

  int run() {
    return run_staged([&](Stage& stage) {
      stage("read cipher " + in.string());
      keyfile::ReadReport cr, kr;
      const auto cipher = keyfile::read_cipher(in, &cr);
      warn_trailing(cr, in);
      stage("read key " + key.string());
      const auto k = keyfile::read_key(key, &kr);
      warn_trailing(kr, key);
      stage("decrypt");
      AudioSignal sig;
      sig.samples = decrypt(cipher, k);
      sig.sample_rate = cipher.sample_rate > 0 ? cipher.sample_rate : 44100;
      sig.channels = cipher.channels > 0 ? cipher.channels : 1;
      sig.format = format == "float32" ? SampleFormat::Float32 : SampleFormat::PCM16;
      stage("write output " + out.string());
      write_wav(out, sig);
      if (!verify.empty()) {
        stage("verify against " + verify.string());
        const AudioSignal orig = read_wav(verify);
        if (orig.samples.size() != sig.samples.size()) {
          throw error(errc::length_mismatch, "original has " + std::to_string(orig.samples.size()) +
                                                 " samples, decrypted has " +
                                                 std::to_string(sig.samples.size()));
        }
        double residual = 0.0;
        for (std::size_t i = 0; i < sig.samples.size(); ++i) {
          residual = std::max(residual, std::fabs(sig.samples[i] - orig.samples[i]));
        }
        std::cout << "max_residual=" << format_double(residual) << "\n";
        try {
          std::cout << "rho=" << format_double(metrics::correlation(orig.samples, sig.samples)) << "\n";
        } catch (const error&) {
          std::cout << "rho=undefined\n";
        }
        std::cout << "verify=" << (residual <= 1e-9 ? "ok" : "mismatch") << "\n";
      }
      return 0;
    });
  }
};

struct AnalyzeCmd {
  std::vector<fs::path> inputs;
  std::size_t bins = metrics::kDefaultEntropyBins;
  std::size_t lag = 1;
  std::size_t window = metrics::kDefaultWindow;
  std::size_t hop = metrics::kDefaultHop;
  fs::path histogram_csv, spectrogram_csv;
  bool json = false;

  int run() {
    return run_staged([&](Stage& stage) {
      std::vector<LoadedSignal> sigs;
      for (const auto& p : inputs) {
        stage("read " + p.string());
        sigs.push_back(load_signal(p));
      }
      const LoadedSignal& subject = sigs.back();
      const metrics::ReportOptions opts{bins, lag};

      stage("metrics");
      metrics::Report report;
      std::optional<metrics::Report> ref_report;
      if (sigs.size() == 2) {
        report = metrics::analyze(sigs[0].samples, subject.samples, opts);
        ref_report = metrics::analyze(sigs[0].samples, opts);
      } else {
        report = metrics::analyze(subject.samples, opts);
      }

      if (!histogram_csv.empty()) {
        stage("histogram " + histogram_csv.string());
        const auto h = metrics::histogram(subject.samples, bins);
        auto out = open_csv(histogram_csv);
        out << "bin_lo,bin_hi,count\n";
        for (std::size_t i = 0; i < h.counts.size(); ++i) {
          out << format_double(h.bin_edges[i]) << ',' << format_double(h.bin_edges[i + 1]) << ','
              << h.counts[i] << '\n';
        }
      }
      if (!spectrogram_csv.empty()) {
        stage("spectrogram " + spectrogram_csv.string());
        const auto sg = metrics::spectrogram(subject.samples, window, hop, subject.sample_rate);
        auto out = open_csv(spectrogram_csv);
        out << "time_s,freq_hz,magnitude\n";
        for (std::size_t f = 0; f < sg.frames; ++f) {
          for (std::size_t b = 0; b < sg.bins; ++b) {
            out << format_double(sg.frame_time(f)) << ',' << format_double(sg.bin_frequency(b)) << ','
                << format_double(sg.at(f, b)) << '\n';
          }
        }
      }

      stage("report");
      print_report(report, ref_report);
      return 0;
    });
  }

  void print_report(const metrics::Report& r, const std::optional<metrics::Report>& ref) const {
    if (json) {
      nlohmann::ordered_json j;
      auto num = [](double v) -> nlohmann::ordered_json {
        if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
        return v;
      };
      if (r.rho) j["rho"] = num(*r.rho);
      j["rho_lag1"] = num(r.rho_lag1);
      if (r.mse) j["mse"] = num(*r.mse);
      if (r.psnr_db) j["psnr_db"] = num(*r.psnr_db);
      j["entropy_bits"] = num(r.entropy_bits);
      if (ref) {
        j["rho_lag1_ref"] = num(ref->rho_lag1);
        j["entropy_bits_ref"] = num(ref->entropy_bits);
      }
      j["bins"] = bins;
      j["lag"] = lag;
      std::cout << j.dump(2) << "\n";
      return;
    }
    if (r.rho) std::cout << "rho=" << format_double(*r.rho) << "\n";
    std::cout << "rho_lag1=" << format_double(r.rho_lag1) << "\n";
    if (r.mse) std::cout << "mse=" << format_double(*r.mse) << "\n";
    if (r.psnr_db) std::cout << "psnr_db=" << format_double(*r.psnr_db) << "\n";
    std::cout << "entropy_bits=" << format_double(r.entropy_bits) << "\n";
    if (ref) {
      std::cout << "rho_lag1_ref=" << format_double(ref->rho_lag1) << "\n";
      std::cout << "entropy_bits_ref=" << format_double(ref->entropy_bits) << "\n";
    }
    std::cout << "bins=" << bins << "\nlag=" << lag << "\n";
    if (!spectrogram_csv.empty()) std::cout << "window=hann:" << window << "\nhop=" << hop << "\n";
  }
};

struct KeystreamCmd {
  std::size_t length = 1000;
  fs::path out;
  LorenzFlags lorenz;

  int run() {
    return run_staged([&](Stage& stage) {
      stage("keystream");
      const auto cfg = lorenz.config();
      const auto states = lorenz::trajectory_window(cfg, length);
      std::ofstream file;
      if (!out.empty()) file = open_csv(out);
      std::ostream& os = out.empty() ? std::cout : file;
      os << "step,x,y,z\n";
      for (std::size_t i = 0; i < states.size(); ++i) {
        os << i << ',' << format_double(cfg.scale * states[i].x) << ','
           << format_double(cfg.scale * states[i].y) << ',' << format_double(cfg.scale * states[i].z)
           << '\n';
      }
      return 0;
    });
  }
};

struct BifurcationCmd {
  std::string sweep = "rho";
  double lo = 15.0, hi = 50.0;
  std::size_t grid = 100;
  std::size_t transient = 5000, record = 20000;
  unsigned threads = 1;
  fs::path out;
  LorenzFlags lorenz;

  int run() {
    return run_staged([&](Stage& stage) {
      stage("bifurcation scan over " + sweep);
      const auto which = sweep == "sigma" ? lorenz::SweepParam::Sigma
                         : sweep == "beta" ? lorenz::SweepParam::Beta
                                           : lorenz::SweepParam::Rho;
      lorenz::BifurcationOptions opts;
      opts.transient = transient;
      opts.record = record;
      opts.threads = threads;
      opts.initial = lorenz.config().initial;
      const auto points = lorenz::bifurcation_scan(which, lo, hi, grid, lorenz.config().params, opts);
      std::ofstream file;
      if (!out.empty()) file = open_csv(out);
      std::ostream& os = out.empty() ? std::cout : file;
      os << "param,zmax\n";
      std::size_t diverged = 0;
      for (const auto& p : points) {
        const std::string param = format_double(p.param);
        if (p.diverged) {
          ++diverged;
          os << param << ",nan\n";
        } else if (p.maxima.empty()) {
          os << param << ",\n";
        } else {
          for (double m : p.maxima) os << param << ',' << format_double(m) << '\n';
        }
      }
      if (diverged > 0) std::cerr << "ezaudio: " << diverged << " parameter values diverged\n";
      return 0;
    });
  }
};

struct FixturesCmd {
  fs::path out;
  std::size_t length = fixtures::kDefaultLength;
  std::uint64_t seed = fixtures::kDefaultSeed;

  int run() {
    return run_staged([&](Stage& stage) {
      stage("create " + out.string());
      fs::create_directories(out);
      for (const auto& f : fixtures::all(length, seed)) {
        const auto path = out / (f.name + ".wav");
        stage("write " + path.string());
        write_wav(path, f.signal);
        std::cout << path.string() << "\n";
      }
      return 0;
    });
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lorenz-chaos + Elzaki-transform audio cipher and analysis toolkit", "ezaudio"};
  app.require_subcommand(1);

  EncryptCmd enc;
  auto* enc_app = app.add_subcommand("encrypt", "encrypt a WAV file into cipher and key files");
  enc_app->add_option("--in", enc.in, "input WAV")->required();
  enc_app->add_option("--out", enc.out, "output cipher file (.ezc)")->required();
  enc_app->add_option("--key", enc.key, "output key file (.ezk)")->required();
  enc_app->add_option("--block-size", enc.block_size, "coefficient index period")
      ->check(CLI::Range(std::uint32_t{1}, kMaxBlockSize))
      ->capture_default_str();
  enc.lorenz.attach(enc_app);

  DecryptCmd dec;
  auto* dec_app = app.add_subcommand("decrypt", "decrypt a cipher file back to WAV");
  dec_app->add_option("--in", dec.in, "cipher file (.ezc)")->required();
  dec_app->add_option("--key", dec.key, "key file (.ezk)")->required();
  dec_app->add_option("--out", dec.out, "output WAV")->required();
  dec_app->add_option("--format", dec.format, "output sample format")
      ->check(CLI::IsMember({"pcm16", "float32"}))
      ->capture_default_str();
  dec_app->add_option("--verify", dec.verify, "original WAV to compare against");

  AnalyzeCmd ana;
  auto* ana_app = app.add_subcommand("analyze", "metrics for one signal or a reference/subject pair");
  ana_app->add_option("inputs", ana.inputs, "WAV or cipher files: [reference] subject")
      ->required()
      ->expected(1, 2);
  ana_app->add_option("--bins", ana.bins, "histogram/entropy bins")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  ana_app->add_option("--lag", ana.lag, "shift for adjacent-sample correlation")->capture_default_str();
  ana_app->add_option("--window", ana.window, "spectrogram window length")->capture_default_str();
  ana_app->add_option("--hop", ana.hop, "spectrogram hop")->capture_default_str();
  ana_app->add_option("--histogram", ana.histogram_csv, "write histogram CSV");
  ana_app->add_option("--spectrogram", ana.spectrogram_csv, "write spectrogram CSV");
  ana_app->add_flag("--json", ana.json, "emit the report as JSON");

  KeystreamCmd ks;
  auto* ks_app = app.add_subcommand("keystream", "emit the Lorenz trajectory/keystream as CSV");
  ks_app->add_option("--length", ks.length, "number of states")->capture_default_str();
  ks_app->add_option("--out", ks.out, "CSV path (default stdout)");
  ks.lorenz.attach(ks_app);

  BifurcationCmd bif;
  auto* bif_app = app.add_subcommand("bifurcation", "z-maxima over a parameter sweep as CSV");
  bif_app->add_option("--sweep", bif.sweep, "swept parameter")
      ->check(CLI::IsMember({"sigma", "rho", "beta"}))
      ->capture_default_str();
  bif_app->add_option("--lo", bif.lo)->capture_default_str();
  bif_app->add_option("--hi", bif.hi)->capture_default_str();
  bif_app->add_option("--grid", bif.grid, "number of parameter values")->capture_default_str();
  bif_app->add_option("--transient", bif.transient, "discarded steps")->capture_default_str();
  bif_app->add_option("--record", bif.record, "recorded steps")->capture_default_str();
  bif_app->add_option("--threads", bif.threads)->capture_default_str();
  bif_app->add_option("--out", bif.out, "CSV path (default stdout)");
  bif.lorenz.attach(bif_app);

  FixturesCmd fix;
  auto* fix_app = app.add_subcommand("fixtures", "write the deterministic WAV test corpus");
  fix_app->add_option("--out", fix.out, "output directory")->required();
  fix_app->add_option("--length", fix.length, "samples per fixture")->capture_default_str();
  fix_app->add_option("--seed", fix.seed, "noise seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*enc_app) return enc.run();
  if (*dec_app) return dec.run();
  if (*ana_app) return ana.run();
  if (*ks_app) return ks.run();
  if (*bif_app) return bif.run();
  if (*fix_app) return fix.run();
  return kExitOther;
}
