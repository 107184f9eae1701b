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

#include <array>
#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lfsynth/audio.hpp"
#include "lfsynth/g711.hpp"
#include "lfsynth/rng.hpp"

namespace lfs {

enum class SourceLabel { kGenuine, kSpoof };

std::string_view to_string(SourceLabel label);
SourceLabel parse_source_label(std::string_view text);

enum class CodecKind { kG711ALaw, kG711MuLaw, kExternal };

std::string_view to_string(CodecKind kind);
CodecKind parse_codec_kind(std::string_view text);

struct CodecSpec {
  std::string name;
  CodecKind kind = CodecKind::kG711MuLaw;
  double bitrate_kbps = 64.0;
  // Argument vector with {input}/{output} placeholders; run without a shell.
  std::vector<std::string> command;
  int work_rate_hz = 8000;

  void validate() const;
};

struct ExternalCodecOptions {
  std::chrono::milliseconds timeout{120'000};
  std::filesystem::path workdir = std::filesystem::temp_directory_path();
};

// Writes w (at spec.work_rate_hz) to a private temp WAV, runs the command,
// reads the decoded WAV back and returns it at w's sample rate.
Waveform apply_external_codec(const Waveform& w, const CodecSpec& spec,
                              const ExternalCodecOptions& options = {});

Waveform apply_codec(const Waveform& w, const CodecSpec& spec,
                     const ExternalCodecOptions& options = {});

std::vector<CodecSpec> load_codec_registry(const std::filesystem::path& path);

struct NoiseMix {
  Waveform audio;
  // The noise actually added: cropped/tiled and scaled.
  Waveform scaled_noise;
  double gain = 0.0;
  std::size_t offset = 0;
  std::size_t clipped = 0;
};

// Mixes noise into w at the requested broadband SNR. Noise longer than w is
// cropped at a random offset; shorter noise is tiled.
NoiseMix add_noise(const Waveform& w, const Waveform& noise, double snr_db,
                   Rng& rng);

// Reverberates with the peak-normalized RIR and restores the input RMS.
Waveform apply_rir(const Waveform& w, const Waveform& rir);

struct NoiseSpec {
  std::filesystem::path noise_dir;
  std::filesystem::path rir_dir;
  double snr_db = 10.0;
};

struct CorpusFile {
  std::string id;  // file name
  Waveform audio;
};

struct Corpora {
  std::vector<CorpusFile> noises;
  std::vector<CorpusFile> rirs;
  double snr_db = 10.0;
};

// Loads every *.wav in each directory, sorted by file name, resampled to
// sample_rate.
Corpora load_corpora(const NoiseSpec& spec, int sample_rate);

enum class Variant { kOriginal, kNoise, kCompressed, kCompressedThenNoise };

inline constexpr std::array<Variant, 4> kAllVariants = {
    Variant::kOriginal, Variant::kNoise, Variant::kCompressed,
    Variant::kCompressedThenNoise};

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view text);

// A clip after trimming and level randomization.
struct StandardizedClip {
  std::string id;
  std::string speaker;
  SourceLabel label = SourceLabel::kSpoof;
  Waveform audio;
  double applied_level_db = 0.0;
};

struct ProcessedSegment {
  Waveform audio;
  std::string source_id;
  std::string speaker;
  SourceLabel source_label = SourceLabel::kSpoof;
  Variant variant = Variant::kOriginal;
  std::optional<std::string> codec_used;
  std::optional<std::string> noise_used;
  std::optional<std::string> rir_used;
  double applied_level_db = 0.0;
  std::size_t clipped = 0;
  // Set when the variant could not be produced; audio is then empty.
  std::optional<std::string> failure;

  bool ok() const { return !failure.has_value(); }
};

// The four canonical variants, in canonical order: original, RIR+noise,
// codec, codec+RIR+noise. One codec, one noise file and one RIR are drawn
// per clip and shared by the variants that use them. A failing codec marks
// variants 3 and 4 failed; variants 1 and 2 are still produced.
std::array<ProcessedSegment, 4> expand_variants(
    const StandardizedClip& clip, const std::vector<CodecSpec>& codecs,
    const Corpora& corpora, Rng& rng, const ExternalCodecOptions& options = {});

}  // namespace lfs
