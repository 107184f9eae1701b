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

#include "lfsynth/degrade.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"

#include "lfsynth/error.hpp"

namespace lfs {

std::string_view to_string(SourceLabel label) {
  return label == SourceLabel::kGenuine ? "genuine" : "spoof";
}

SourceLabel parse_source_label(std::string_view text) {
  if (text == "genuine" || text == "bonafide") return SourceLabel::kGenuine;
  if (text == "spoof") return SourceLabel::kSpoof;
  throw Error(Errc::kInvalidArgument, "unknown label '" + std::string(text) + "'");
}

std::string_view to_string(CodecKind kind) {
  switch (kind) {
    case CodecKind::kG711ALaw: return "g711_alaw";
    case CodecKind::kG711MuLaw: return "g711_ulaw";
    case CodecKind::kExternal: return "external";
  }
  return "external";
}

CodecKind parse_codec_kind(std::string_view text) {
  if (text == "g711_alaw") return CodecKind::kG711ALaw;
  if (text == "g711_ulaw") return CodecKind::kG711MuLaw;
  if (text == "external") return CodecKind::kExternal;
  throw Error(Errc::kConfigError, "unknown codec kind '" + std::string(text) + "'");
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kOriginal: return "original";
    case Variant::kNoise: return "noise";
    case Variant::kCompressed: return "compressed";
    case Variant::kCompressedThenNoise: return "compressed_then_noise";
  }
  return "original";
}

Variant parse_variant(std::string_view text) {
  for (Variant v : kAllVariants) {
    if (to_string(v) == text) return v;
  }
  throw Error(Errc::kInvalidArgument, "unknown variant '" + std::string(text) + "'");
}

void CodecSpec::validate() const {
  if (name.empty()) throw Error(Errc::kConfigError, "codec with empty name");
  if (kind == CodecKind::kExternal) {
    if (command.empty() || command.front().empty()) {
      throw Error(Errc::kConfigError, "external codec '" + name + "' has no command");
    }
  } else if (work_rate_hz != 8000) {
    throw Error(Errc::kConfigError, "G.711 codec '" + name + "' must work at 8000 Hz");
  }
  if (work_rate_hz <= 0) {
    throw Error(Errc::kConfigError, "codec '" + name + "' has non-positive work rate");
  }
}

Waveform apply_codec(const Waveform& w, const CodecSpec& spec,
                     const ExternalCodecOptions& options) {
  switch (spec.kind) {
    case CodecKind::kG711ALaw: return compand_g711(w, G711Law::kALaw);
    case CodecKind::kG711MuLaw: return compand_g711(w, G711Law::kMuLaw);
    case CodecKind::kExternal: return apply_external_codec(w, spec, options);
  }
  return w;
}

std::vector<CodecSpec> load_codec_registry(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kConfigError, "cannot open codec registry " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kConfigError, path.string() + ": " + e.what());
  }
  std::vector<CodecSpec> out;
  try {
    for (const auto& item : doc.at("codecs")) {
      CodecSpec spec;
      spec.name = item.at("name").get<std::string>();
      spec.kind = parse_codec_kind(item.at("kind").get<std::string>());
      spec.bitrate_kbps = item.value("bitrate_kbps", 64.0);
      spec.work_rate_hz =
          item.value("work_rate_hz", spec.kind == CodecKind::kExternal ? 16000 : 8000);
      if (item.contains("command")) {
        spec.command = item.at("command").get<std::vector<std::string>>();
      }
      spec.validate();
      out.push_back(std::move(spec));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kConfigError, path.string() + ": " + e.what());
  }
  if (out.empty()) throw Error(Errc::kConfigError, path.string() + " lists no codecs");
  return out;
}

NoiseMix add_noise(const Waveform& w, const Waveform& noise, double snr_db, Rng& rng) {
  if (w.sample_rate() != noise.sample_rate()) {
    throw Error(Errc::kRateMismatch,
                "speech " + std::to_string(w.sample_rate()) + " Hz, noise " +
                    std::to_string(noise.sample_rate()) + " Hz");
  }
  if (!std::isfinite(snr_db)) throw Error(Errc::kInvalidArgument, "SNR must be finite");
  const double signal_ms = mean_square(w.view());
  if (w.empty() || signal_ms <= 0.0) throw Error(Errc::kSilentInput, "speech is silent");
  if (noise.empty() || mean_square(noise.view()) <= 0.0) {
    throw Error(Errc::kSilentNoise, "noise is silent");
  }

  NoiseMix mix;
  std::vector<double> segment(w.size());
  if (noise.size() >= w.size()) {
    mix.offset = rng.index(noise.size() - w.size() + 1);
    std::copy_n(noise.samples().begin() + static_cast<std::ptrdiff_t>(mix.offset),
                w.size(), segment.begin());
  } else {
    mix.offset = rng.index(noise.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      segment[i] = noise[(mix.offset + i) % noise.size()];
    }
  }
  const double noise_ms = mean_square(segment);
  if (noise_ms <= 0.0) throw Error(Errc::kSilentNoise, "selected noise excerpt is silent");

  mix.gain = std::sqrt(signal_ms / noise_ms) * std::pow(10.0, -snr_db / 20.0);
  std::vector<double> out(w.samples());
  for (std::size_t i = 0; i < out.size(); ++i) {
    segment[i] *= mix.gain;
    out[i] += segment[i];
  }
  mix.clipped = clamp_in_place(out);
  mix.audio = Waveform(std::move(out), w.sample_rate());
  mix.scaled_noise = Waveform(std::move(segment), w.sample_rate());
  return mix;
}

Waveform apply_rir(const Waveform& w, const Waveform& rir) {
  Waveform wet = convolve(w, rir);
  const double in_ms = mean_square(w.view());
  const double out_ms = mean_square(wet.view());
  if (in_ms <= 0.0 || out_ms <= 0.0) return wet;
  const double g = std::sqrt(in_ms / out_ms);
  std::vector<double> scaled(wet.samples());
  for (double& s : scaled) s *= g;
  return Waveform(std::move(scaled), w.sample_rate());
}

namespace {

std::vector<CorpusFile> load_dir(const std::filesystem::path& dir, int sample_rate,
                                 std::string_view what) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(Errc::kConfigError, std::string(what) + " directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    return a.filename().string() < b.filename().string();
  });
  if (files.empty()) {
    throw Error(Errc::kConfigError, std::string(what) + " directory has no .wav files: " + dir.string());
  }
  std::vector<CorpusFile> out;
  out.reserve(files.size());
  for (const auto& f : files) {
    out.push_back({f.filename().string(), resample(read_wav(f), sample_rate)});
  }
  return out;
}

ProcessedSegment base_segment(const StandardizedClip& clip, Variant v) {
  ProcessedSegment s;
  s.source_id = clip.id;
  s.speaker = clip.speaker;
  s.source_label = clip.label;
  s.variant = v;
  s.applied_level_db = clip.applied_level_db;
  return s;
}

}  // namespace

Corpora load_corpora(const NoiseSpec& spec, int sample_rate) {
  Corpora c;
  c.noises = load_dir(spec.noise_dir, sample_rate, "noise");
  c.rirs = load_dir(spec.rir_dir, sample_rate, "RIR");
  c.snr_db = spec.snr_db;
  return c;
}

std::array<ProcessedSegment, 4> expand_variants(const StandardizedClip& clip,
                                                const std::vector<CodecSpec>& codecs,
                                                const Corpora& corpora, Rng& rng,
                                                const ExternalCodecOptions& options) {
  if (codecs.empty()) throw Error(Errc::kConfigError, "no codecs configured");
  if (corpora.noises.empty() || corpora.rirs.empty()) {
    throw Error(Errc::kConfigError, "noise and RIR corpora must be loaded");
  }
  const CodecSpec& codec = codecs[rng.index(codecs.size())];
  const CorpusFile& noise = corpora.noises[rng.index(corpora.noises.size())];
  const CorpusFile& rir = corpora.rirs[rng.index(corpora.rirs.size())];

  std::array<ProcessedSegment, 4> out = {
      base_segment(clip, Variant::kOriginal), base_segment(clip, Variant::kNoise),
      base_segment(clip, Variant::kCompressed),
      base_segment(clip, Variant::kCompressedThenNoise)};

  out[0].audio = clip.audio;

  {
    auto mix = add_noise(apply_rir(clip.audio, rir.audio), noise.audio, corpora.snr_db, rng);
    out[1].audio = std::move(mix.audio);
    out[1].clipped = mix.clipped;
    out[1].noise_used = noise.id;
    out[1].rir_used = rir.id;
  }

  out[2].codec_used = codec.name;
  out[3].codec_used = codec.name;
  out[3].noise_used = noise.id;
  out[3].rir_used = rir.id;
  try {
    Waveform compressed = apply_codec(clip.audio, codec, options);
    out[2].audio = compressed;
    try {
      auto mix = add_noise(apply_rir(compressed, rir.audio), noise.audio, corpora.snr_db, rng);
      out[3].audio = std::move(mix.audio);
      out[3].clipped = mix.clipped;
    } catch (const std::exception& e) {
      out[3].failure = e.what();
    }
  } catch (const std::exception& e) {
    out[2].failure = e.what();
    out[3].failure = e.what();
  }
  return out;
}

}  // namespace lfs
