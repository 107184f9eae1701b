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

#include "lfsynth/audio.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lfsynth/error.hpp"

namespace lfs {

Waveform::Waveform(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate_ <= 0) {
    throw Error(Errc::kInvalidRate,
                "sample rate must be positive, got " +
                    std::to_string(sample_rate_));
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw Error(Errc::kInvalidArgument,
                  "non-finite sample at index " + std::to_string(i));
    }
  }
}

Waveform Waveform::zeros(std::size_t n, int sample_rate) {
  return Waveform(std::vector<double>(n, 0.0), sample_rate);
}

Waveform Waveform::slice(std::size_t begin, std::size_t end) const {
  end = std::min(end, samples_.size());
  begin = std::min(begin, end);
  return Waveform(std::vector<double>(samples_.begin() + begin,
                                      samples_.begin() + end),
                  sample_rate_);
}

std::size_t seconds_to_samples(double seconds, int sample_rate) {
  if (!(seconds >= 0.0)) {
    throw Error(Errc::kInvalidArgument,
                "duration must be non-negative: " + std::to_string(seconds));
  }
  return static_cast<std::size_t>(std::llround(seconds * sample_rate));
}

std::size_t clamp_in_place(std::vector<double>& samples) {
  std::size_t clipped = 0;
  for (double& s : samples) {
    if (s > 1.0) {
      s = 1.0;
      ++clipped;
    } else if (s < -1.0) {
      s = -1.0;
      ++clipped;
    }
  }
  return clipped;
}

Waveform apply_gain(const Waveform& w, double gain_db) {
  if (!std::isfinite(gain_db)) {
    throw Error(Errc::kInvalidArgument, "gain must be finite");
  }
  const double g = std::pow(10.0, gain_db / 20.0);
  std::vector<double> out(w.samples());
  for (double& s : out) s *= g;
  return Waveform(std::move(out), w.sample_rate());
}

double mean_square(std::span<const double> samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (double s : samples) acc += s * s;
  return acc / static_cast<double>(samples.size());
}

LevelDb rms_level_db(const Waveform& w) {
  if (w.empty()) {
    throw Error(Errc::kEmptyInput, "level of an empty waveform");
  }
  const double ms = mean_square(w.view());
  if (ms <= 0.0) {
    throw Error(Errc::kSilentSignal, "all-zero signal has no RMS level");
  }
  return {10.0 * std::log10(ms), LevelKind::kRms};
}

ClampedWaveform overlap_add(const Waveform& a, const Waveform& b,
                            double overlap_s) {
  if (a.sample_rate() != b.sample_rate()) {
    throw Error(Errc::kRateMismatch,
                std::to_string(a.sample_rate()) + " Hz vs " +
                    std::to_string(b.sample_rate()) + " Hz");
  }
  const std::size_t ov = seconds_to_samples(overlap_s, a.sample_rate());
  if (ov > std::min(a.size(), b.size())) {
    throw Error(Errc::kOverlapTooLong,
                std::to_string(ov) + " overlap samples exceed segment length " +
                    std::to_string(std::min(a.size(), b.size())));
  }
  std::vector<double> out;
  out.reserve(a.size() + b.size() - ov);
  out.insert(out.end(), a.samples().begin(), a.samples().end());
  const std::size_t join = a.size() - ov;
  for (std::size_t i = 0; i < ov; ++i) out[join + i] += b[i];
  out.insert(out.end(), b.samples().begin() + ov, b.samples().end());

  ClampedWaveform result;
  result.clipped = clamp_in_place(out);
  result.audio = Waveform(std::move(out), a.sample_rate());
  return result;
}

}  // namespace lfs
