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

#include "lfsynth/standardize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "lfsynth/error.hpp"

namespace lfs {

void TrimParams::validate() const {
  if (!(threshold_db < 0.0)) throw Error(Errc::kConfigError, "trim threshold_db must be < 0");
  if (!(window_ms > 0.0)) throw Error(Errc::kConfigError, "trim window_ms must be > 0");
  if (!(pad_ms >= 0.0)) throw Error(Errc::kConfigError, "trim pad_ms must be >= 0");
}

void LevelRange::validate() const {
  if (!(low_db <= high_db && high_db <= 0.0)) {
    throw Error(Errc::kConfigError, "level range requires low_db <= high_db <= 0");
  }
}

Waveform trim_silence(const Waveform& w, const TrimParams& p) {
  p.validate();
  if (w.empty()) throw Error(Errc::kEmptyInput, "cannot trim an empty waveform");

  const std::size_t win =
      std::max<std::size_t>(1, seconds_to_samples(p.window_ms / 1000.0, w.sample_rate()));
  const std::size_t pad_samples = seconds_to_samples(p.pad_ms / 1000.0, w.sample_rate());
  const std::size_t pad = ((pad_samples + win - 1) / win) * win;
  const double floor_ms = std::pow(10.0, p.threshold_db / 10.0);

  const auto& x = w.samples();
  const std::size_t n_windows = (x.size() + win - 1) / win;
  auto active = [&](std::size_t k) {
    const std::size_t b = k * win;
    const std::size_t e = std::min(x.size(), b + win);
    return mean_square(std::span<const double>(x).subspan(b, e - b)) >= floor_ms;
  };

  std::optional<std::size_t> first;
  for (std::size_t k = 0; k < n_windows; ++k) {
    if (active(k)) {
      first = k;
      break;
    }
  }
  if (!first) {
    throw Error(Errc::kAllSilent,
                "no window above " + std::to_string(p.threshold_db) + " dBFS");
  }
  std::size_t last = *first;
  for (std::size_t k = n_windows; k-- > *first;) {
    if (active(k)) {
      last = k;
      break;
    }
  }

  const std::size_t begin = *first * win >= pad ? *first * win - pad : 0;
  const std::size_t end = std::min(x.size(), (last + 1) * win + pad);
  if (begin == 0 && end == x.size()) return w;
  return w.slice(begin, end);
}

namespace {

constexpr double kEnvelopeTimeConstant = 0.03;  // s
constexpr double kHangover = 0.2;               // s
constexpr double kMarginDb = 15.9;
constexpr int kThresholds = 15;
constexpr double kMinDuration = 0.1;            // s

}  // namespace

LevelDb active_speech_level(const Waveform& w) {
  if (w.empty()) throw Error(Errc::kEmptyInput, "active level of an empty waveform");
  if (w.duration_s() < kMinDuration) {
    throw Error(Errc::kTooShort,
                "need at least 100 ms, got " + std::to_string(w.duration_s() * 1000.0) + " ms");
  }

  const double fs = w.sample_rate();
  const double g = std::exp(-1.0 / (fs * kEnvelopeTimeConstant));
  const auto hang_limit = static_cast<long>(std::floor(kHangover * fs + 0.5));

  std::array<double, kThresholds> c{};
  for (int j = 0; j < kThresholds; ++j) c[j] = std::pow(2.0, j - kThresholds);

  std::array<long, kThresholds> activity{};
  std::array<long, kThresholds> hang{};
  hang.fill(hang_limit);

  double sq = 0.0;
  double p = 0.0;
  double q = 0.0;
  for (double x : w.samples()) {
    sq += x * x;
    p = g * p + (1.0 - g) * std::abs(x);
    q = g * q + (1.0 - g) * p;
    for (int j = 0; j < kThresholds; ++j) {
      if (q >= c[j]) {
        ++activity[j];
        hang[j] = 0;
      } else if (hang[j] < hang_limit) {
        ++activity[j];
        ++hang[j];
      }
    }
  }

  auto activity_db = [&](int j) {
    return 10.0 * std::log10(sq / static_cast<double>(activity[j]));
  };
  auto threshold_db = [&](int j) { return 20.0 * std::log10(c[j]); };

  if (activity[0] == 0 || sq <= 0.0) {
    throw Error(Errc::kNoActivity, "envelope never reaches the lowest threshold");
  }
  double prev_delta = activity_db(0) - threshold_db(0);
  if (prev_delta <= kMarginDb) {
    throw Error(Errc::kNoActivity, "signal too quiet for the threshold ladder");
  }
  for (int j = 1; j < kThresholds; ++j) {
    if (activity[j] == 0) break;
    const double delta = activity_db(j) - threshold_db(j);
    if (delta <= kMarginDb) {
      // Point on the segment between ladder steps j-1 and j where the
      // margin equals kMarginDb.
      const double t = (prev_delta - kMarginDb) / (prev_delta - delta);
      const double a0 = activity_db(j - 1);
      const double level = a0 + t * (activity_db(j) - a0);
      return {level, LevelKind::kActiveP56};
    }
    prev_delta = delta;
  }
  throw Error(Errc::kNoActivity, "margin never drops to 15.9 dB across the threshold ladder");
}

LevelRandomization randomize_level(const Waveform& w, const LevelRange& r, Rng& rng) {
  r.validate();
  LevelRandomization out;
  out.measured_rms = rms_level_db(w);
  try {
    out.measured_active = active_speech_level(w);
  } catch (const Error& e) {
    if (e.code() != Errc::kNoActivity) throw;
    out.measured_active = {out.measured_rms.value, LevelKind::kRms};
    out.rms_fallback = true;
  }
  const double target = rng.uniform(r.low_db, r.high_db);
  out.applied_target = {target, LevelKind::kActiveP56};
  out.audio = apply_gain(w, target - out.measured_active.value);
  return out;
}

}  // namespace lfs
