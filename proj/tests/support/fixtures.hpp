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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lfsynth/audio.hpp"
#include "lfsynth/rng.hpp"

namespace lfs::testing {

// Voiced-speech stand-in: a harmonic series on a wandering pitch, gated
// into syllables with short pauses.
Waveform speech_like(Rng& rng, double seconds, int sample_rate = 16000, double peak = 0.3);

// Pink-ish noise (first-order lowpassed white noise).
Waveform colored_noise(Rng& rng, double seconds, int sample_rate = 16000);

// Exponentially decaying noise burst after a unit direct path.
Waveform synthetic_rir(Rng& rng, double rt60_s, int sample_rate = 16000);

Waveform sine(double freq_hz, double amplitude, double seconds, int sample_rate = 16000);

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "lfsynth-test");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct CorpusLayout {
  std::filesystem::path clips;
  std::filesystem::path protocol;
  std::filesystem::path noises;
  std::filesystem::path rirs;
  std::filesystem::path registry;
};

// Writes a synthetic clip corpus with an ASVspoof-style protocol, noise and
// RIR directories, and a G.711 codec registry under `root`.
CorpusLayout write_corpus(const std::filesystem::path& root, std::size_t n_genuine,
                          std::size_t n_spoof, std::uint64_t seed = 7);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace lfs::testing
