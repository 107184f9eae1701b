// Copyright 2026 The lfsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fixtures.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lfs::testing {

namespace fs = std::filesystem;

Waveform speech_like(Rng& rng, double seconds, int sample_rate, double peak) {
  const auto n = static_cast<std::size_t>(std::llround(seconds * sample_rate));
  std::vector<double> x(n, 0.0);
  const double f0_base = rng.uniform(90.0, 220.0);
  double phase = 0.0;
  std::size_t i = 0;
  while (i < n) {
    const auto syllable = static_cast<std::size_t>(rng.uniform(0.12, 0.35) * sample_rate);
    const auto pause = static_cast<std::size_t>(rng.uniform(0.02, 0.12) * sample_rate);
    const double f0 = f0_base * rng.uniform(0.85, 1.15);
    const double amp = rng.uniform(0.5, 1.0);
    for (std::size_t k = 0; k < syllable && i < n; ++k, ++i) {
      phase += 2.0 * std::numbers::pi * f0 / sample_rate;
      const double env = std::sin(std::numbers::pi * static_cast<double>(k) / syllable);
      double v = 0.0;
      for (int h = 1; h <= 8; ++h) v += std::sin(h * phase) / h;
      x[i] = amp * env * v;
    }
    i += pause;
  }
  double hi = 0.0;
  for (double v : x) hi = std::max(hi, std::abs(v));
  if (hi > 0.0) {
    for (double& v : x) v *= peak / hi;
  }
  return Waveform(std::move(x), sample_rate);
}

Waveform colored_noise(Rng& rng, double seconds, int sample_rate) {
  const auto n = static_cast<std::size_t>(std::llround(seconds * sample_rate));
  std::vector<double> x(n);
  double state = 0.0;
  for (auto& v : x) {
    state = 0.7 * state + 0.3 * rng.uniform(-1.0, 1.0);
    v = 0.5 * state;
  }
  return Waveform(std::move(x), sample_rate);
}

Waveform synthetic_rir(Rng& rng, double rt60_s, int sample_rate) {
  const auto n = static_cast<std::size_t>(rt60_s * sample_rate);
  std::vector<double> h(std::max<std::size_t>(n, 2), 0.0);
  h[0] = 1.0;
  const double decay = std::log(1000.0) / (rt60_s * sample_rate);
  for (std::size_t i = 1; i < h.size(); ++i) {
    h[i] = 0.4 * rng.uniform(-1.0, 1.0) * std::exp(-decay * static_cast<double>(i));
  }
  return Waveform(std::move(h), sample_rate);
}

Waveform sine(double freq_hz, double amplitude, double seconds, int sample_rate) {
  const auto n = static_cast<std::size_t>(std::llround(seconds * sample_rate));
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * static_cast<double>(i) /
                                sample_rate);
  }
  return Waveform(std::move(x), sample_rate);
}

TempDir::TempDir(const std::string& tag) {
  std::string templ = (fs::temp_directory_path() / (tag + "-XXXXXX")).string();
  if (mkdtemp(templ.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = templ;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

CorpusLayout write_corpus(const fs::path& root, std::size_t n_genuine, std::size_t n_spoof,
                          std::uint64_t seed) {
  CorpusLayout c{root / "clips", root / "protocol.txt", root / "noise", root / "rir",
                 root / "codecs.json"};
  fs::create_directories(c.clips);
  fs::create_directories(c.noises);
  fs::create_directories(c.rirs);
  Rng rng(seed);
  std::ostringstream proto;
  auto clip = [&](const std::string& id, const std::string& speaker, const std::string& system,
                  const char* key) {
    // Silence margins give trimming something to remove.
    const Waveform speech = speech_like(rng, rng.uniform(1.2, 3.0));
    std::vector<double> x(1600, 0.0);
    x.insert(x.end(), speech.samples().begin(), speech.samples().end());
    x.insert(x.end(), 2400, 0.0);
    write_wav(Waveform(std::move(x), 16000), c.clips / (id + ".wav"));
    proto << speaker << ' ' << id << ' ' << system << " - " << key << '\n';
  };
  for (std::size_t i = 0; i < n_genuine; ++i) {
    clip("G_" + std::to_string(1000 + i), "SPK" + std::to_string(i % 7), "-", "bonafide");
  }
  for (std::size_t i = 0; i < n_spoof; ++i) {
    clip("S_" + std::to_string(1000 + i), "SPK" + std::to_string(i % 7),
         "A0" + std::to_string(1 + i % 6), "spoof");
  }
  write_text(c.protocol, proto.str());
  for (int k = 0; k < 3; ++k) {
    write_wav(colored_noise(rng, 1.0 + k), c.noises / ("noise" + std::to_string(k) + ".wav"));
  }
  for (int k = 0; k < 2; ++k) {
    write_wav(synthetic_rir(rng, 0.2 + 0.2 * k), c.rirs / ("rir" + std::to_string(k) + ".wav"));
  }
  write_text(c.registry,
             R"({"codecs": [)"
             R"({"name": "g711a", "kind": "g711_alaw", "bitrate_kbps": 64},)"
             R"({"name": "g711u", "kind": "g711_ulaw", "bitrate_kbps": 64}]})");
  return c;
}

}  // namespace lfs::testing
