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
#include <map>
#include <set>
#include <vector>

#include "fixtures.hpp"
#include "lfsynth/degrade.hpp"
#include "lfsynth/error.hpp"
#include "lfsynth/g711.hpp"

using namespace lfs;
using lfs::testing::TempDir;

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

// Reconstruction values from the segment/step definition of G.711,
// independent of the table-driven implementation.
double alaw_reference(std::uint8_t c) {
  const int v = c ^ 0x55;
  const bool positive = v & 0x80;
  const int seg = (v >> 4) & 7;
  const int q = v & 0xF;
  const double mag = seg == 0 ? 2.0 * q + 1.0 : (2.0 * q + 33.0) * std::ldexp(1.0, seg - 1);
  return (positive ? mag : -mag) / 4096.0;
}

double ulaw_reference(std::uint8_t c) {
  const int v = ~c & 0xFF;
  const bool negative = v & 0x80;
  const int seg = (v >> 4) & 7;
  const int q = v & 0xF;
  const double mag = (2.0 * q + 33.0) * std::ldexp(1.0, seg) - 33.0;
  return (negative ? -mag : mag) / 8192.0;
}

double snr_db(std::span<const double> ref, std::span<const double> test) {
  double s = 0, n = 0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    s += ref[i] * ref[i];
    n += (test[i] - ref[i]) * (test[i] - ref[i]);
  }
  return 10.0 * std::log10(s / n);
}

Waveform delta(std::size_t n = 1) {
  std::vector<double> h(n, 0.0);
  h[0] = 1.0;
  return Waveform(std::move(h), 16000);
}

StandardizedClip clip_of(Rng& rng, const std::string& id, SourceLabel label, double seconds) {
  return {id, "SPK", label, lfs::testing::speech_like(rng, seconds), -22.0};
}

Corpora small_corpora(Rng& rng) {
  Corpora c;
  c.noises = {{"n0.wav", lfs::testing::colored_noise(rng, 0.3)},
              {"n1.wav", lfs::testing::colored_noise(rng, 0.05)}};
  c.rirs = {{"r0.wav", lfs::testing::synthetic_rir(rng, 0.01)},
            {"r1.wav", lfs::testing::synthetic_rir(rng, 0.02)}};
  return c;
}

CodecSpec codec_of(const std::string& name, CodecKind kind) {
  CodecSpec c;
  c.name = name;
  c.kind = kind;
  return c;
}

}  // namespace

TEST_CASE("G.711 decode matches the segment definition") {
  for (int c = 0; c < 256; ++c) {
    const auto code = static_cast<std::uint8_t>(c);
    CHECK(g711::decode(code, G711Law::kALaw) == alaw_reference(code));
    CHECK(g711::decode(code, G711Law::kMuLaw) == ulaw_reference(code));
  }
}

TEST_CASE("G.711 encode(decode(c)) == c for every codeword") {
  for (int c = 0; c < 256; ++c) {
    const auto code = static_cast<std::uint8_t>(c);
    CHECK(g711::encode(g711::decode(code, G711Law::kALaw), G711Law::kALaw) == code);
    CHECK(g711::encode(g711::decode(code, G711Law::kMuLaw), G711Law::kMuLaw) == code);
  }
}

TEST_CASE("G.711 quantization error is bounded by half a step") {
  Rng rng(1);
  for (int i = 0; i < 20000; ++i) {
    const double x = rng.uniform(-0.97, 0.97);
    {
      const double y = g711::decode(g711::encode(x, G711Law::kALaw), G711Law::kALaw);
      // Segment 0 spans [0, 32) in 1/4096 units; segment s >= 1 spans
      // [16 * 2^s, 32 * 2^s) with step 2^s (step 2 for s <= 1).
      const double v = std::abs(x) * 4096.0;
      const int seg = v < 32.0 ? 0 : static_cast<int>(std::floor(std::log2(v / 16.0)));
      const double step = std::ldexp(1.0, std::max(seg, 1)) / 4096.0;
      CHECK(std::abs(y - x) <= step / 2 + 1.0 / 4096);
    }
    {
      const double y = g711::decode(g711::encode(x, G711Law::kMuLaw), G711Law::kMuLaw);
      // Largest μ-law step below |x|.
      double step = 2.0 / 8192;
      for (int s = 0; s < 8; ++s) {
        if (std::abs(x) * 8192.0 + 33.0 >= 32.0 * std::ldexp(1.0, s)) step = std::ldexp(2.0, s) / 8192;
      }
      CHECK(std::abs(y - x) <= step / 2 + 1.0 / 8192);
    }
  }
}

TEST_CASE("compand_g711") {
  SUBCASE("zero in, (near) zero out") {
    const Waveform z = Waveform::zeros(1600, 16000);
    const Waveform mu = compand_g711(z, G711Law::kMuLaw);
    const Waveform a = compand_g711(z, G711Law::kALaw);
    for (double v : mu.samples()) CHECK(v == 0.0);
    for (double v : a.samples()) CHECK(std::abs(v) < 1e-3);
  }
  SUBCASE("full-scale 440 Hz sine at 8 kHz keeps at least 33 dB SNR") {
    const Waveform s = lfs::testing::sine(440.0, 1.0, 1.0, 8000);
    for (auto law : {G711Law::kALaw, G711Law::kMuLaw}) {
      const Waveform y = compand_g711(s, law);
      REQUIRE(y.size() == s.size());
      CHECK(snr_db(s.samples(), y.samples()) >= 33.0);
    }
  }
  SUBCASE("duration preserved across rates") {
    Rng rng(2);
    for (int rate : {8000, 16000, 22050, 44100}) {
      for (int t = 0; t < 4; ++t) {
        const std::size_t n = 100 + rng.index(20000);
        const Waveform w = Waveform::zeros(n, rate);
        CHECK(compand_g711(w, G711Law::kALaw).size() == n);
      }
    }
  }
}

TEST_CASE("add_noise gain") {
  Rng rng(3);
  const Waveform w({0.5, -0.5, 0.5, -0.5}, 16000);
  const Waveform n({-0.5, 0.5, -0.5, 0.5}, 16000);
  CHECK(add_noise(w, n, 10.0, rng).gain == doctest::Approx(std::pow(10.0, -0.5)));
  CHECK(add_noise(w, n, 10.0, rng).gain == doctest::Approx(0.3162).epsilon(1e-4));
  CHECK(add_noise(w, n, 0.0, rng).gain == doctest::Approx(1.0));
}

TEST_CASE("add_noise crops long noise and tiles short noise") {
  Rng rng(4);
  std::vector<double> ramp(50);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.01 * static_cast<double>(i + 1);
  const Waveform noise(ramp, 16000);
  const Waveform w(std::vector<double>(20, 0.1), 16000);
  for (int t = 0; t < 20; ++t) {
    const auto mix = add_noise(w, noise, 20.0, rng);
    REQUIRE(mix.audio.size() == w.size());
    CHECK(mix.offset + w.size() <= noise.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      CHECK(mix.scaled_noise[i] == doctest::Approx(mix.gain * ramp[mix.offset + i]));
    }
  }
  const Waveform long_w(std::vector<double>(130, 0.1), 16000);
  const auto tiled = add_noise(long_w, noise, 5.0, rng);
  for (std::size_t i = 0; i < long_w.size(); ++i) {
    CHECK(tiled.scaled_noise[i] == doctest::Approx(tiled.gain * ramp[(tiled.offset + i) % 50]));
  }
}

TEST_CASE("add_noise achieves the requested SNR") {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const Waveform s = lfs::testing::speech_like(rng, rng.uniform(0.3, 2.0), 16000, 0.2);
    const Waveform n = lfs::testing::colored_noise(rng, rng.uniform(0.1, 3.0));
    const double target = rng.uniform(0.0, 30.0);
    const auto mix = add_noise(s, n, target, rng);
    CHECK(mix.clipped == 0);
    double ps = 0, pn = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      ps += s[i] * s[i];
      const double r = mix.audio[i] - s[i];
      pn += r * r;
    }
    CHECK(std::abs(10.0 * std::log10(ps / pn) - target) <= 0.1);
  }
}

TEST_CASE("add_noise errors") {
  Rng rng(6);
  const Waveform w({0.1, 0.2}, 16000);
  CHECK(code_of([&] { add_noise(Waveform::zeros(2, 16000), w, 10, rng); }) == Errc::kSilentInput);
  CHECK(code_of([&] { add_noise(w, Waveform::zeros(2, 16000), 10, rng); }) == Errc::kSilentNoise);
  CHECK(code_of([&] { add_noise(w, Waveform({0.1}, 8000), 10, rng); }) == Errc::kRateMismatch);
}

TEST_CASE("apply_rir") {
  Rng rng(7);
  const Waveform s = lfs::testing::speech_like(rng, 0.5);
  const Waveform id = apply_rir(s, delta());
  REQUIRE(id.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(id[i] - s[i]) <= 1e-6);
  for (int t = 0; t < 10; ++t) {
    const Waveform h = lfs::testing::synthetic_rir(rng, rng.uniform(0.01, 0.5));
    const Waveform y = apply_rir(s, h);
    CHECK(y.size() == s.size());
    CHECK(rms_level_db(y).value == doctest::Approx(rms_level_db(s).value).epsilon(1e-9));
  }
  CHECK(code_of([&] { apply_rir(s, Waveform({}, 16000)); }) == Errc::kEmptyImpulse);
}

TEST_CASE("external codec") {
  TempDir dir;
  Rng rng(8);
  const Waveform s = lfs::testing::speech_like(rng, 0.4);
  ExternalCodecOptions opts;
  opts.workdir = dir.path();
  CodecSpec c;
  c.name = "copy";
  c.kind = CodecKind::kExternal;
  c.work_rate_hz = 16000;

  SUBCASE("identity copy") {
    c.command = {"cp", "{input}", "{output}"};
    const Waveform y = apply_external_codec(s, c, opts);
    REQUIRE(y.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(y[i] - s[i]) <= 1.0 / 32768);
  }
  SUBCASE("work rate round trip keeps duration") {
    c.command = {"cp", "{input}", "{output}"};
    c.work_rate_hz = 8000;
    CHECK(apply_external_codec(s, c, opts).size() == s.size());
  }
  SUBCASE("missing executable") {
    c.command = {"lfsynth-no-such-codec", "{input}", "{output}"};
    try {
      apply_external_codec(s, c, opts);
      FAIL("expected failure");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::kCodecProcessFailed);
      CHECK(std::string(e.what()).find("lfsynth-no-such-codec") != std::string::npos);
    }
  }
  SUBCASE("nonzero exit carries stderr") {
    c.command = {"sh", "-c", "echo broken-pipe-xyz >&2; exit 3", "{input}", "{output}"};
    try {
      apply_external_codec(s, c, opts);
      FAIL("expected failure");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::kCodecProcessFailed);
      CHECK(std::string(e.what()).find("broken-pipe-xyz") != std::string::npos);
    }
  }
  SUBCASE("exit 0 without output") {
    c.command = {"true", "{input}", "{output}"};
    CHECK(code_of([&] { apply_external_codec(s, c, opts); }) == Errc::kOutputMissing);
  }
  SUBCASE("timeout") {
    c.command = {"sh", "-c", "sleep 5", "{input}", "{output}"};
    opts.timeout = std::chrono::milliseconds(200);
    CHECK(code_of([&] { apply_external_codec(s, c, opts); }) == Errc::kTimeout);
  }
  // No leftovers in the work directory.
  CHECK(std::filesystem::is_empty(dir.path()));
}

TEST_CASE("codec registry") {
  TempDir dir;
  const auto p = dir.path() / "r.json";
  lfs::testing::write_text(p, R"({"codecs":[{"name":"a","kind":"g711_alaw","bitrate_kbps":64},
    {"name":"x","kind":"external","command":["cp","{input}","{output}"]}]})");
  const auto r = load_codec_registry(p);
  REQUIRE(r.size() == 2);
  CHECK(r[0].kind == CodecKind::kG711ALaw);
  CHECK(r[0].work_rate_hz == 8000);
  CHECK(r[1].work_rate_hz == 16000);
  CHECK(r[1].command.size() == 3);

  lfs::testing::write_text(p, R"({"codecs":[{"name":"x","kind":"external"}]})");
  CHECK(code_of([&] { load_codec_registry(p); }) == Errc::kConfigError);
  lfs::testing::write_text(p, R"({"codecs":[{"name":"x","kind":"mp3"}]})");
  CHECK(code_of([&] { load_codec_registry(p); }) == Errc::kConfigError);
  lfs::testing::write_text(p, R"({"codecs":[]})");
  CHECK(code_of([&] { load_codec_registry(p); }) == Errc::kConfigError);
  lfs::testing::write_text(p, "{not json");
  CHECK(code_of([&] { load_codec_registry(p); }) == Errc::kConfigError);
  CHECK(code_of([&] { load_codec_registry(dir.path() / "none.json"); }) == Errc::kConfigError);
}

TEST_CASE("labels and variant names") {
  CHECK(parse_source_label("bonafide") == SourceLabel::kGenuine);
  CHECK(parse_source_label("genuine") == SourceLabel::kGenuine);
  CHECK(parse_source_label("spoof") == SourceLabel::kSpoof);
  CHECK(code_of([] { parse_source_label("maybe"); }) == Errc::kInvalidArgument);
  for (Variant v : kAllVariants) CHECK(parse_variant(to_string(v)) == v);
}

TEST_CASE("expand_variants") {
  Rng rng(9);
  const Corpora corpora = small_corpora(rng);
  const std::vector<CodecSpec> codecs = {codec_of("a", CodecKind::kG711ALaw),
                                         codec_of("u", CodecKind::kG711MuLaw)};
  const auto clip = clip_of(rng, "c1", SourceLabel::kGenuine, 0.5);

  SUBCASE("four canonical variants with immutable labels") {
    Rng r(1);
    const auto out = expand_variants(clip, codecs, corpora, r);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(out[i].variant == kAllVariants[i]);
      CHECK(out[i].source_label == SourceLabel::kGenuine);
      CHECK(out[i].source_id == "c1");
      CHECK(out[i].ok());
      CHECK(out[i].audio.size() == clip.audio.size());
    }
    CHECK(out[0].audio == clip.audio);
    CHECK_FALSE(out[0].codec_used);
    CHECK_FALSE(out[1].codec_used);
    CHECK(out[1].noise_used);
    CHECK(out[1].rir_used);
    CHECK(out[2].codec_used);
    CHECK_FALSE(out[2].noise_used);
    CHECK(out[3].codec_used == out[2].codec_used);
    CHECK(out[3].noise_used == out[1].noise_used);
    CHECK(out[3].rir_used == out[1].rir_used);
  }
  SUBCASE("spoof labels survive too") {
    Rng r(1);
    auto sp = clip;
    sp.label = SourceLabel::kSpoof;
    for (const auto& s : expand_variants(sp, codecs, corpora, r)) {
      CHECK(s.source_label == SourceLabel::kSpoof);
    }
  }
  SUBCASE("same seed, same selections and audio") {
    Rng a(42), b(42);
    const auto x = expand_variants(clip, codecs, corpora, a);
    const auto y = expand_variants(clip, codecs, corpora, b);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(x[i].codec_used == y[i].codec_used);
      CHECK(x[i].noise_used == y[i].noise_used);
      CHECK(x[i].rir_used == y[i].rir_used);
      CHECK(x[i].audio == y[i].audio);
    }
  }
  SUBCASE("failing codec only fails the codec variants") {
    CodecSpec bad;
    bad.name = "bad";
    bad.kind = CodecKind::kExternal;
    bad.command = {"false", "{input}", "{output}"};
    Rng r(1);
    const auto out = expand_variants(clip, {bad}, corpora, r);
    CHECK(out[0].ok());
    CHECK(out[1].ok());
    CHECK_FALSE(out[2].ok());
    CHECK_FALSE(out[3].ok());
    CHECK(out[2].failure->find("CodecProcessFailed") != std::string::npos);
  }
}

TEST_CASE("codec selection is uniform over 8 codecs") {
  Rng rng(10);
  Corpora corpora = small_corpora(rng);
  std::vector<CodecSpec> codecs;
  for (int i = 0; i < 8; ++i) {
    codecs.push_back(codec_of("c" + std::to_string(i), i % 2 ? CodecKind::kG711ALaw : CodecKind::kG711MuLaw));
  }
  const StandardizedClip tiny{"t", "S", SourceLabel::kSpoof, lfs::testing::sine(300, 0.2, 0.01), -20};
  std::map<std::string, int> counts;
  for (int i = 0; i < 10000; ++i) {
    Rng r(derive_seed(99, "degrade/t", static_cast<std::uint64_t>(i)));
    ++counts[*expand_variants(tiny, codecs, corpora, r)[2].codec_used];
  }
  REQUIRE(counts.size() == 8);
  for (const auto& [name, n] : counts) {
    CHECK_MESSAGE(std::abs(n - 1250) <= 150, name << " drawn " << n << " times");
  }
}

TEST_CASE("load_corpora") {
  TempDir dir;
  const auto c = lfs::testing::write_corpus(dir.path(), 1, 1);
  const Corpora k = load_corpora(NoiseSpec{c.noises, c.rirs, 12.0}, 8000);
  REQUIRE(k.noises.size() == 3);
  CHECK(k.noises[0].id == "noise0.wav");
  CHECK(k.noises[2].id == "noise2.wav");
  CHECK(k.noises[0].audio.sample_rate() == 8000);
  CHECK(k.rirs.size() == 2);
  CHECK(k.snr_db == 12.0);
  CHECK(code_of([&] { load_corpora(NoiseSpec{dir.path() / "nope", c.rirs, 10}, 16000); }) ==
        Errc::kConfigError);
  CHECK(code_of([&] { load_corpora(NoiseSpec{c.clips.parent_path() / "empty", c.rirs, 10}, 16000); }) ==
        Errc::kConfigError);
}
