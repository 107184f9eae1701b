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

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace lfs {

// Mono audio. Nominal full scale is [-1, 1]; intermediate stages (gain,
// mixing) may exceed it until the result is clamped or written.
class Waveform {
 public:
  Waveform() = default;
  Waveform(std::vector<double> samples, int sample_rate);

  static Waveform zeros(std::size_t n, int sample_rate);

  const std::vector<double>& samples() const noexcept { return samples_; }
  std::span<const double> view() const noexcept { return samples_; }
  int sample_rate() const noexcept { return sample_rate_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  double duration_s() const noexcept {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }

  double operator[](std::size_t i) const { return samples_[i]; }

  // Copy of samples [begin, end).
  Waveform slice(std::size_t begin, std::size_t end) const;

  friend bool operator==(const Waveform&, const Waveform&) = default;

 private:
  std::vector<double> samples_;
  int sample_rate_ = 16000;
};

struct ClampedWaveform {
  Waveform audio;
  std::size_t clipped = 0;
};

enum class LevelKind { kRms, kActiveP56 };

struct LevelDb {
  double value = 0.0;
  LevelKind kind = LevelKind::kRms;
};

// round(seconds * rate), the sample count used for every duration parameter.
std::size_t seconds_to_samples(double seconds, int sample_rate);

// Clamps to [-1, 1], returns the number of samples that were out of range.
std::size_t clamp_in_place(std::vector<double>& samples);

// --- WAV I/O: RIFF/WAVE, PCM 16-bit, mono, little-endian. ---

Waveform read_wav(const std::filesystem::path& path);

// Returns the number of samples clamped before quantization.
std::size_t write_wav(const Waveform& w, const std::filesystem::path& path);

// --- DSP primitives ---

// Windowed-sinc band-limited interpolation. Identity when rates agree.
Waveform resample(const Waveform& w, int target_rate);

Waveform apply_gain(const Waveform& w, double gain_db);

double mean_square(std::span<const double> samples);

// 20*log10(rms). Throws SilentSignal on all-zero input.
LevelDb rms_level_db(const Waveform& w);

// Appends b to a, summing the last round(overlap_s*rate) samples of a with
// the first samples of b. Out-of-range sums are clamped and counted.
ClampedWaveform overlap_add(const Waveform& a, const Waveform& b,
                            double overlap_s);

// Linear convolution with the peak-normalized impulse, truncated to len(w).
Waveform convolve(const Waveform& w, const Waveform& impulse);

}  // namespace lfs
