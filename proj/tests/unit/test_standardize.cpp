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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "fixtures.hpp"
#include "lfsynth/error.hpp"
#include "lfsynth/standardize.hpp"

using namespace lfs;

namespace {

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::kInvalidArgument;
}

Waveform concat(std::initializer_list<Waveform> parts) {
  std::vector<double> x;
  int rate = 16000;
  for (const auto& p : parts) {
    x.insert(x.end(), p.samples().begin(), p.samples().end());
    rate = p.sample_rate();
  }
  return Waveform(std::move(x), rate);
}

double energy(std::span<const double> x) {
  double e = 0;
  for (double v : x) e += v * v;
  return e;
}

double db(double amplitude_rms) { return 20.0 * std::log10(amplitude_rms); }

}  // namespace

TEST_CASE("trim_silence keeps the tone and at most the padding") {
  // -6 dBFS peak tone.
  const double amp = std::pow(10.0, -6.0 / 20.0);
  const Waveform tone = lfs::testing::sine(440.0, amp, 1.0);
  const Waveform w = concat({Waveform::zeros(16000, 16000), tone, Waveform::zeros(16000, 16000)});
  const Waveform t = trim_silence(w, TrimParams{});
  CHECK(t.duration_s() >= 1.0);
  CHECK(t.duration_s() <= 1.1);
  CHECK(energy(t.samples()) >= 0.99 * energy(tone.samples()));
}

TEST_CASE("trim_silence on signals without silent edges is the identity") {
  const Waveform tone = lfs::testing::sine(300.0, 0.3, 0.73);
  CHECK(trim_silence(tone, TrimParams{}) == tone);
  Rng rng(4);
  const Waveform speech = lfs::testing::speech_like(rng, 1.0);
  const Waveform t = trim_silence(speech, TrimParams{});
  CHECK(t.size() <= speech.size());
}

TEST_CASE("trim_silence errors") {
  CHECK(code_of([] { trim_silence(Waveform::zeros(16000, 16000), TrimParams{}); }) ==
        Errc::kAllSilent);
  // Below -50 dBFS everywhere.
  CHECK(code_of([] { trim_silence(lfs::testing::sine(100, 1e-4, 1.0), TrimParams{}); }) ==
        Errc::kAllSilent);
  CHECK(code_of([] { trim_silence(Waveform({}, 16000), TrimParams{}); }) == Errc::kEmptyInput);
  CHECK(code_of([] { TrimParams{-50, 0, 50}.validate(); }) == Errc::kConfigError);
  CHECK(code_of([] { TrimParams{-50, 10, -1}.validate(); }) == Errc::kConfigError);
}

TEST_CASE("trim_silence is idempotent and never lengthens") {
  Rng rng(21);
  for (int trial = 0; trial < 150; ++trial) {
    const auto lead = rng.index(20000), tail = rng.index(20000);
    const Waveform s = lfs::testing::speech_like(rng, rng.uniform(0.2, 1.5));
    std::vector<double> x(lead, 0.0);
    // Low-level hiss around the threshold in some trials.
    if (trial % 3 == 0) {
      for (auto& v : x) v = rng.uniform(-0.005, 0.005);
    }
    x.insert(x.end(), s.samples().begin(), s.samples().end());
    x.insert(x.end(), tail, 0.0);
    const Waveform w(std::move(x), 16000);
    TrimParams p;
    p.window_ms = rng.uniform(5.0, 30.0);
    p.pad_ms = rng.uniform(0.0, 120.0);
    p.threshold_db = rng.uniform(-60.0, -40.0);
    const Waveform once = trim_silence(w, p);
    CHECK(once.size() <= w.size());
    CHECK(trim_silence(once, p) == once);
  }
}

TEST_CASE("active_speech_level on fully active signals") {
  std::vector<double> sq(32000);
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = (i / 40) % 2 ? 1.0 : -1.0;
  CHECK(std::abs(active_speech_level(Waveform(sq, 16000)).value) <= 0.2);

  const Waveform s = lfs::testing::sine(440.0, 0.5, 2.0);
  const double oracle = db(0.5 / std::sqrt(2.0));  // -9.03
  CHECK(std::abs(active_speech_level(s).value - oracle) <= 0.5);
  CHECK(active_speech_level(s).kind == LevelKind::kActiveP56);
}

TEST_CASE("active_speech_level on half-silent signals reports the active half") {
  const Waveform s = lfs::testing::sine(440.0, 0.5, 2.0);
  const Waveform w = concat({Waveform::zeros(32000, 16000), s});
  const double active_oracle = db(0.5 / std::sqrt(2.0));
  const double rms_oracle = active_oracle - 10.0 * std::log10(2.0);  // -12.04
  CHECK(std::abs(active_speech_level(w).value - active_oracle) <= 1.0);
  CHECK(rms_level_db(w).value == doctest::Approx(rms_oracle).epsilon(1e-3));
}

TEST_CASE("active level dominates RMS when silence is present") {
  Rng rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const Waveform sp = lfs::testing::speech_like(rng, rng.uniform(0.8, 2.5), 16000,
                                                  rng.uniform(0.05, 0.9));
    const Waveform w = concat({Waveform::zeros(rng.index(16000) + 800, 16000), sp});
    CHECK(active_speech_level(w).value >= rms_level_db(w).value);
  }
  // Stationary noise: active within 0.5 dB of RMS.
  for (int trial = 0; trial < 10; ++trial) {
    const Waveform n = lfs::testing::colored_noise(rng, 1.5);
    CHECK(std::abs(active_speech_level(n).value - rms_level_db(n).value) <= 0.5);
  }
}

TEST_CASE("active_speech_level errors") {
  CHECK(code_of([] { active_speech_level(Waveform::zeros(16000, 16000)); }) == Errc::kNoActivity);
  CHECK(code_of([] { active_speech_level(lfs::testing::sine(300, 0.5, 0.05)); }) ==
        Errc::kTooShort);
}

TEST_CASE("randomize_level") {
  Rng src(2);
  const Waveform speech = lfs::testing::speech_like(src, 2.0);
  SUBCASE("degenerate range forces the target") {
    Rng rng(1);
    const auto r = randomize_level(speech, LevelRange{-20, -20}, rng);
    CHECK(r.applied_target.value == -20.0);
    CHECK(std::abs(active_speech_level(r.audio).value + 20.0) <= 0.5);
    CHECK_FALSE(r.rms_fallback);
  }
  SUBCASE("same seed, same result") {
    Rng a(77), b(77);
    const auto ra = randomize_level(speech, LevelRange{}, a);
    const auto rb = randomize_level(speech, LevelRange{}, b);
    CHECK(ra.applied_target.value == rb.applied_target.value);
    CHECK(ra.audio == rb.audio);
  }
  SUBCASE("measured level lands in range") {
    Rng rng(5);
    for (int t = 0; t < 30; ++t) {
      const Waveform s = lfs::testing::speech_like(rng, rng.uniform(0.5, 2.0), 16000,
                                                   rng.uniform(0.01, 0.9));
      const auto r = randomize_level(s, LevelRange{}, rng);
      const double lv = active_speech_level(r.audio).value;
      CHECK(lv >= -26.5);
      CHECK(lv <= -17.5);
    }
  }
  SUBCASE("target draws are uniform over the range") {
    Rng rng(123);
    const Waveform s = lfs::testing::sine(200, 0.1, 0.2);
    double sum = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      const double t = randomize_level(s, LevelRange{}, rng).applied_target.value;
      CHECK(t >= -26.0);
      CHECK(t <= -18.0);
      sum += t;
    }
    CHECK(std::abs(sum / n + 22.0) <= 0.1);
  }
  SUBCASE("invalid range") {
    CHECK(code_of([] { LevelRange{-10, -20}.validate(); }) == Errc::kConfigError);
  }
}
