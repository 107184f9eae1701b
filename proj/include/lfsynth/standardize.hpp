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

#include "lfsynth/audio.hpp"
#include "lfsynth/rng.hpp"

namespace lfs {

struct TrimParams {
  double threshold_db = -50.0;
  double window_ms = 10.0;
  double pad_ms = 50.0;

  void validate() const;
};

struct LevelRange {
  double low_db = -26.0;
  double high_db = -18.0;

  void validate() const;
};

// Removes leading and trailing silence.
//
// The signal is cut into consecutive windows of window_ms starting at
// sample 0; a window is silent when its RMS is below threshold_db. Output
// spans the first through last non-silent window, widened by pad_ms on each
// side where audio exists. Padding is rounded up to whole windows so that a
// second pass sees the same window grid and trimming is idempotent.
Waveform trim_silence(const Waveform& w, const TrimParams& p);

// ITU-T P.56 method B active speech level in dBFS.
//
// Envelope: two cascaded one-pole smoothers on |x| with a 0.03 s time
// constant. Activity is counted against a ladder of 15 thresholds
// (2^-15 .. 2^-1 of full scale) with 0.2 s hangover. The active level is
// found where the margin between activity level and threshold crosses
// 15.9 dB, linearly interpolated between ladder steps.
LevelDb active_speech_level(const Waveform& w);

struct LevelRandomization {
  Waveform audio;
  LevelDb applied_target{0.0, LevelKind::kActiveP56};
  LevelDb measured_active{0.0, LevelKind::kActiveP56};
  LevelDb measured_rms{0.0, LevelKind::kRms};
  // P.56 found no activity; the gain was computed from the RMS level.
  bool rms_fallback = false;
};

// Draws a target active level uniformly from the range and applies the gain
// that moves the measured level onto it.
LevelRandomization randomize_level(const Waveform& w, const LevelRange& r,
                                   Rng& rng);

}  // namespace lfs
