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

#include "lfsynth/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "lfsynth/error.hpp"
#include "lfsynth/longform.hpp"
#include "lfsynth/rng.hpp"

namespace lfs {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

std::mutex& log_mutex() {
  static std::mutex m;
  return m;
}

void log_line(bool enabled, const std::string& msg) {
  if (!enabled) return;
  std::lock_guard<std::mutex> lock(log_mutex());
  std::cerr << "[lfsynth] " << msg << '\n';
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

fs::path resolve(const fs::path& base, const fs::path& p) {
  if (p.empty() || p.is_absolute()) return p;
  return base / p;
}

std::string ordinal_id(const std::string& partition, std::size_t k) {
  std::ostringstream os;
  os << partition << '_' << std::setw(6) << std::setfill('0') << k;
  return os.str();
}

fs::path segment_path(const fs::path& dir, const std::string& clip, Variant v) {
  return dir / (clip + "__" + std::string(to_string(v)) + ".wav");
}

ojson trim_json(const TrimParams& t) {
  return ojson{{"threshold_db", t.threshold_db}, {"window_ms", t.window_ms}, {"pad_ms", t.pad_ms}};
}

ojson level_json(const LevelRange& l) {
  return ojson{{"low_db", l.low_db}, {"high_db", l.high_db}};
}

ojson codec_json(const CodecSpec& c) {
  ojson o;
  o["name"] = c.name;
  o["kind"] = to_string(c.kind);
  o["bitrate_kbps"] = c.bitrate_kbps;
  o["work_rate_hz"] = c.work_rate_hz;
  o["command"] = c.command;
  return o;
}

template <typename F>
void with_config_errors(const std::string& where, F&& f) {
  try {
    f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kConfigError, where + ": " + e.what());
  }
}

}  // namespace

unsigned effective_workers(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t)>& fn) {
  workers = static_cast<unsigned>(std::min<std::size_t>(effective_workers(workers), std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
      }
    }
  };
  if (workers <= 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
}

PipelineConfig load_pipeline_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kConfigError, "cannot open config " + path.string());
  ojson doc;
  with_config_errors(path.string(), [&] { doc = ojson::parse(in); });
  if (!doc.is_object()) throw Error(Errc::kConfigError, path.string() + ": top level must be an object");

  static const std::set<std::string> known = {
      "master_seed", "sample_rate", "trim", "level", "pool_dir", "output_dir",
      "codec_registry", "noise_dir", "rir_dir", "snr_db", "codec_timeout_s",
      "workers", "scale_divisor", "partitions", "verbose"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) throw Error(Errc::kConfigError, path.string() + ": unknown key '" + key + "'");
  }

  const fs::path base = path.parent_path();
  PipelineConfig cfg;
  with_config_errors(path.string(), [&] {
    cfg.master_seed = doc.value("master_seed", cfg.master_seed);
    cfg.sample_rate = doc.value("sample_rate", cfg.sample_rate);
    if (doc.contains("trim")) {
      const auto& t = doc.at("trim");
      cfg.trim.threshold_db = t.value("threshold_db", cfg.trim.threshold_db);
      cfg.trim.window_ms = t.value("window_ms", cfg.trim.window_ms);
      cfg.trim.pad_ms = t.value("pad_ms", cfg.trim.pad_ms);
    }
    if (doc.contains("level")) {
      const auto& l = doc.at("level");
      cfg.level.low_db = l.value("low_db", cfg.level.low_db);
      cfg.level.high_db = l.value("high_db", cfg.level.high_db);
    }
    cfg.pool_dir = resolve(base, doc.value("pool_dir", std::string()));
    cfg.output_dir = resolve(base, doc.value("output_dir", std::string()));
    cfg.codec_registry = resolve(base, doc.value("codec_registry", std::string()));
    cfg.corpora.noise_dir = resolve(base, doc.value("noise_dir", std::string()));
    cfg.corpora.rir_dir = resolve(base, doc.value("rir_dir", std::string()));
    cfg.corpora.snr_db = doc.value("snr_db", cfg.corpora.snr_db);
    cfg.codec_timeout_s = doc.value("codec_timeout_s", cfg.codec_timeout_s);
    cfg.workers = doc.value("workers", cfg.workers);
    cfg.scale_divisor = doc.value("scale_divisor", cfg.scale_divisor);
    cfg.verbose = doc.value("verbose", cfg.verbose);
    if (doc.contains("partitions")) {
      for (const auto& p : doc.at("partitions")) cfg.partitions.push_back(p.get<PartitionConfig>());
    }
  });
  if (cfg.sample_rate <= 0) throw Error(Errc::kConfigError, "sample_rate must be positive");
  if (cfg.scale_divisor == 0) throw Error(Errc::kConfigError, "scale_divisor must be positive");
  cfg.trim.validate();
  cfg.level.validate();
  return cfg;
}

ojson config_to_json(const PipelineConfig& cfg) {
  ojson o;
  o["master_seed"] = cfg.master_seed;
  o["sample_rate"] = cfg.sample_rate;
  o["trim"] = trim_json(cfg.trim);
  o["level"] = level_json(cfg.level);
  o["pool_dir"] = cfg.pool_dir.string();
  o["output_dir"] = cfg.output_dir.string();
  o["codec_registry"] = cfg.codec_registry.string();
  o["noise_dir"] = cfg.corpora.noise_dir.string();
  o["rir_dir"] = cfg.corpora.rir_dir.string();
  o["snr_db"] = cfg.corpora.snr_db;
  o["codec_timeout_s"] = cfg.codec_timeout_s;
  o["workers"] = cfg.workers;
  o["scale_divisor"] = cfg.scale_divisor;
  o["partitions"] = cfg.partitions;
  return o;
}

std::vector<PartitionConfig> effective_partitions(const PipelineConfig& cfg) {
  std::vector<PartitionConfig> all = builtin_partitions();
  for (const auto& custom : cfg.partitions) {
    custom.validate();
    auto it = std::find_if(all.begin(), all.end(),
                           [&](const PartitionConfig& p) { return p.name == custom.name; });
    if (it != all.end()) {
      *it = custom;
    } else {
      all.push_back(custom);
    }
  }
  for (auto& p : all) {
    p = scale_partition(p, cfg.scale_divisor);
    p.master_seed = cfg.master_seed;
  }
  return all;
}

// --- standardize ---

namespace {

ojson pool_entry_json(const PoolLogEntry& e) {
  ojson o;
  o["clip_id"] = e.clip_id;
  o["speaker"] = e.speaker;
  o["system"] = e.system;
  o["label"] = to_string(e.label);
  o["status"] = e.ok ? "ok" : "skipped";
  if (!e.ok) {
    o["error"] = e.error;
    return o;
  }
  o["sample_rate"] = e.sample_rate;
  o["samples"] = e.samples;
  o["trimmed_samples"] = e.trimmed_samples;
  o["active_level_db"] = e.active_level_db;
  o["rms_level_db"] = e.rms_level_db;
  o["target_level_db"] = e.target_level_db;
  o["rms_fallback"] = e.rms_fallback;
  o["clipped"] = e.clipped;
  return o;
}

PoolLogEntry pool_entry_from(const ojson& o) {
  PoolLogEntry e;
  e.clip_id = o.at("clip_id").get<std::string>();
  e.speaker = o.at("speaker").get<std::string>();
  e.system = o.at("system").get<std::string>();
  e.label = parse_source_label(o.at("label").get<std::string>());
  e.ok = o.at("status").get<std::string>() == "ok";
  if (!e.ok) {
    e.error = o.value("error", std::string());
    return e;
  }
  e.sample_rate = o.at("sample_rate").get<int>();
  e.samples = o.at("samples").get<std::size_t>();
  e.trimmed_samples = o.at("trimmed_samples").get<std::size_t>();
  e.active_level_db = o.at("active_level_db").get<double>();
  e.rms_level_db = o.at("rms_level_db").get<double>();
  e.target_level_db = o.at("target_level_db").get<double>();
  e.rms_fallback = o.at("rms_fallback").get<bool>();
  e.clipped = o.at("clipped").get<std::size_t>();
  return e;
}

}  // namespace

std::vector<PoolLogEntry> read_pool_log(const fs::path& pool_dir) {
  const fs::path path = pool_dir / kStandardizeLog;
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::kConfigError,
                "no standardized pool at " + pool_dir.string() + " (missing " + kStandardizeLog + ")");
  }
  std::vector<PoolLogEntry> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(pool_entry_from(ojson::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::kMalformedLine, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

StandardizeSummary run_standardize(const PipelineConfig& cfg, const fs::path& src_dir,
                                   const fs::path& protocol, const fs::path& out_dir) {
  cfg.trim.validate();
  cfg.level.validate();
  std::vector<ProtocolRow> rows;
  try {
    rows = read_asvspoof_protocol(protocol);
  } catch (const Error& e) {
    if (e.code() != Errc::kIoFailure) throw;
    throw Error(Errc::kConfigError, "unreadable protocol file " + protocol.string());
  }
  if (!fs::is_directory(src_dir)) {
    throw Error(Errc::kConfigError, "source directory not found: " + src_dir.string());
  }
  fs::create_directories(out_dir);
  log_line(cfg.verbose, "standardizing " + std::to_string(rows.size()) + " clips from " +
                            src_dir.string());

  std::vector<PoolLogEntry> results(rows.size());
  parallel_for(rows.size(), cfg.workers, [&](std::size_t i) {
    const ProtocolRow& row = rows[i];
    PoolLogEntry& e = results[i];
    e.clip_id = row.utt_id;
    e.speaker = row.speaker;
    e.system = row.system;
    e.label = row.label;
    try {
      Waveform src = read_wav(src_dir / (row.utt_id + ".wav"));
      src = resample(src, cfg.sample_rate);
      Waveform trimmed = trim_silence(src, cfg.trim);
      Rng rng(derive_seed(cfg.master_seed, "standardize/" + row.utt_id, 0));
      LevelRandomization lv = randomize_level(trimmed, cfg.level, rng);
      e.clipped = write_wav(lv.audio, out_dir / (row.utt_id + ".wav"));
      e.ok = true;
      e.sample_rate = cfg.sample_rate;
      e.samples = lv.audio.size();
      e.trimmed_samples = src.size() - trimmed.size();
      e.active_level_db = lv.measured_active.value;
      e.rms_level_db = lv.measured_rms.value;
      e.target_level_db = lv.applied_target.value;
      e.rms_fallback = lv.rms_fallback;
    } catch (const Error& err) {
      e.ok = false;
      e.error = err.what();
    }
  });

  StandardizeSummary summary;
  std::ofstream log(out_dir / kStandardizeLog, std::ios::binary | std::ios::trunc);
  if (!log) throw Error(Errc::kIoFailure, "cannot write " + (out_dir / kStandardizeLog).string());
  for (const auto& e : results) {
    log << pool_entry_json(e).dump() << '\n';
    if (e.ok) {
      ++summary.processed;
    } else {
      summary.skipped.push_back(e.clip_id + ": " + e.error);
      log_line(cfg.verbose, "warning: skipped " + e.clip_id + ": " + e.error);
    }
  }
  if (!log) throw Error(Errc::kIoFailure, "write failed: " + (out_dir / kStandardizeLog).string());
  return summary;
}

// --- generate ---

namespace {

struct SegmentMeta {
  std::optional<std::string> codec;
  std::optional<std::string> noise;
  std::optional<std::string> rir;
  double applied_level_db = 0.0;
  fs::path path;
};

using SegmentKey = std::pair<std::string, Variant>;

void check_partition(const Manifest& m) {
  const PartitionConfig& p = m.header.partition;
  std::map<int, std::size_t> counts;
  for (const auto& e : m.entries) {
    if ((e.m_genuine < e.n_total) != (e.label == SourceLabel::kSpoof)) {
      throw Error(Errc::kInvalidCounts, e.utt_id + ": label inconsistent with ratio " + e.genuine_ratio);
    }
    ++counts[e.m_genuine];
  }
  if (p.longform) {
    for (const auto& r : p.ratio_schedule) {
      if (counts[r.m_genuine] != r.count) {
        throw Error(Errc::kInvalidCounts, "ratio M=" + std::to_string(r.m_genuine) + " has " +
                                              std::to_string(counts[r.m_genuine]) + " utterances, scheduled " +
                                              std::to_string(r.count));
      }
    }
  }
}

fs::path resolve_codec_registry(const PipelineConfig& cfg) {
  if (!cfg.codec_registry.empty()) return cfg.codec_registry;
  if (const char* env = std::getenv(kCodecRegistryEnv); env != nullptr && *env != '\0') {
    return env;
  }
  throw Error(Errc::kConfigError,
              std::string("processed partitions need a codec registry (config 'codec_registry' or ") +
                  kCodecRegistryEnv + ")");
}

}  // namespace

GenerateSummary run_generate(const PipelineConfig& cfg, const std::string& partition_name) {
  const auto partitions = effective_partitions(cfg);
  const PartitionConfig part = find_partition(partitions, partition_name);
  part.validate();
  if (cfg.output_dir.empty()) throw Error(Errc::kConfigError, "output_dir is not set");

  std::vector<PoolLogEntry> pool_log = read_pool_log(cfg.pool_dir);
  pool_log.erase(std::remove_if(pool_log.begin(), pool_log.end(),
                                [](const PoolLogEntry& e) { return !e.ok; }),
                 pool_log.end());
  std::sort(pool_log.begin(), pool_log.end(),
            [](const PoolLogEntry& a, const PoolLogEntry& b) { return a.clip_id < b.clip_id; });
  for (const auto& e : pool_log) {
    if (e.sample_rate != cfg.sample_rate) {
      throw Error(Errc::kRateMismatch, "pool clip " + e.clip_id + " is " +
                                           std::to_string(e.sample_rate) + " Hz, pipeline runs at " +
                                           std::to_string(cfg.sample_rate) + " Hz");
    }
  }

  ojson fingerprint;
  fingerprint["master_seed"] = cfg.master_seed;
  fingerprint["sample_rate"] = cfg.sample_rate;
  fingerprint["partition"] = part;
  ojson pool_fp = ojson::array();
  for (const auto& e : pool_log) {
    pool_fp.push_back(ojson::array({e.clip_id, to_string(e.label), e.samples, e.target_level_db}));
  }
  fingerprint["pool"] = std::move(pool_fp);

  const fs::path part_dir = cfg.output_dir / part.name;
  const fs::path audio_dir = part_dir / "audio";
  fs::create_directories(audio_dir);

  GenerateSummary summary;
  summary.partition_dir = part_dir;
  SegmentPool pool(cfg.sample_rate);
  std::map<SegmentKey, SegmentMeta> meta;

  if (part.process) {
    const auto codecs = load_codec_registry(resolve_codec_registry(cfg));
    const Corpora corpora = load_corpora(cfg.corpora, cfg.sample_rate);
    ojson codec_fp = ojson::array();
    for (const auto& c : codecs) codec_fp.push_back(codec_json(c));
    fingerprint["codecs"] = std::move(codec_fp);
    ojson noise_fp = ojson::array(), rir_fp = ojson::array();
    for (const auto& n : corpora.noises) noise_fp.push_back(n.id);
    for (const auto& r : corpora.rirs) rir_fp.push_back(r.id);
    fingerprint["noises"] = std::move(noise_fp);
    fingerprint["rirs"] = std::move(rir_fp);
    fingerprint["snr_db"] = corpora.snr_db;

    const fs::path seg_dir = cfg.output_dir / "segments";
    fs::create_directories(seg_dir);
    ExternalCodecOptions codec_opts;
    codec_opts.timeout = std::chrono::milliseconds(
        static_cast<long long>(std::llround(cfg.codec_timeout_s * 1000.0)));

    log_line(cfg.verbose, "expanding " + std::to_string(pool_log.size()) + " clips into 4 variants");
    std::vector<std::array<ProcessedSegment, 4>> expanded(pool_log.size());
    std::vector<std::array<std::size_t, 4>> lengths(pool_log.size());
    parallel_for(pool_log.size(), cfg.workers, [&](std::size_t i) {
      const PoolLogEntry& e = pool_log[i];
      StandardizedClip clip{e.clip_id, e.speaker, e.label,
                            read_wav(cfg.pool_dir / (e.clip_id + ".wav")), e.target_level_db};
      Rng rng(derive_seed(cfg.master_seed, "degrade/" + e.clip_id, 0));
      expanded[i] = expand_variants(clip, codecs, corpora, rng, codec_opts);
      for (std::size_t v = 0; v < 4; ++v) {
        ProcessedSegment& seg = expanded[i][v];
        if (!seg.ok()) continue;
        write_wav(seg.audio, segment_path(seg_dir, e.clip_id, seg.variant));
        lengths[i][v] = seg.audio.size();
        seg.audio = Waveform();
      }
    });
    for (std::size_t i = 0; i < pool_log.size(); ++i) {
      PoolClip clip{pool_log[i].clip_id, pool_log[i].speaker, pool_log[i].label, {}};
      for (std::size_t v = 0; v < 4; ++v) {
        const ProcessedSegment& seg = expanded[i][v];
        if (!seg.ok()) {
          ++summary.failed_variants;
          log_line(cfg.verbose, "warning: " + clip.id + " " + std::string(to_string(seg.variant)) +
                                    " failed: " + *seg.failure);
          continue;
        }
        clip.variants.push_back({seg.variant, lengths[i][v]});
        meta[{clip.id, seg.variant}] = {seg.codec_used, seg.noise_used, seg.rir_used,
                                        seg.applied_level_db,
                                        segment_path(seg_dir, clip.id, seg.variant)};
      }
      pool.add(std::move(clip));
    }
  } else {
    for (const auto& e : pool_log) {
      pool.add({e.clip_id, e.speaker, e.label, {{Variant::kOriginal, e.samples}}});
      meta[{e.clip_id, Variant::kOriginal}] = {std::nullopt, std::nullopt, std::nullopt,
                                               e.target_level_db, cfg.pool_dir / (e.clip_id + ".wav")};
    }
  }

  // Plans are drawn in ordinal order, each from its own derived seed.
  struct Slot {
    int m = 0;
  };
  std::vector<Slot> slots;
  if (part.longform) {
    for (const auto& r : part.ratio_schedule) {
      for (std::size_t k = 0; k < r.count; ++k) slots.push_back({r.m_genuine});
    }
  } else {
    for (std::size_t k = 0; k < part.n_spoof_utts; ++k) slots.push_back({0});
    for (std::size_t k = 0; k < part.n_genuine_utts; ++k) slots.push_back({1});
  }
  std::vector<ConcatPlan> plans;
  plans.reserve(slots.size());
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const std::uint64_t seed = derive_seed(cfg.master_seed, part.name, k);
    Rng rng(seed);
    ConcatPlan plan = plan_utterance(pool, part.n_per_utt, slots[k].m, part.overlap_s, rng);
    plan.utt_id = ordinal_id(part.name, k);
    plan.seed = seed;
    if (plan.redraws > 0) {
      log_line(cfg.verbose, plan.utt_id + ": redrew " + std::to_string(plan.redraws) +
                                " time(s), segment shorter than overlap");
      summary.redraws += static_cast<std::size_t>(plan.redraws);
    }
    plans.push_back(std::move(plan));
  }

  log_line(cfg.verbose, "rendering " + std::to_string(plans.size()) + " utterances for " + part.name);
  std::vector<ManifestEntry> entries(plans.size());
  const SegmentLoader loader = [&meta](const SegmentRef& ref) {
    const auto it = meta.find({ref.clip_id, ref.variant});
    if (it == meta.end() || !fs::exists(it->second.path)) {
      throw Error(Errc::kMissingSegment, ref.clip_id + " " + std::string(to_string(ref.variant)));
    }
    return read_wav(it->second.path);
  };
  parallel_for(plans.size(), cfg.workers, [&](std::size_t k) {
    const ConcatPlan& plan = plans[k];
    RenderedUtterance r = render(plan, loader);
    write_wav(r.audio, audio_dir / (plan.utt_id + ".wav"));
    ManifestEntry& e = entries[k];
    e.utt_id = plan.utt_id;
    e.label = plan.label;
    e.m_genuine = plan.m_genuine;
    e.n_total = plan.n_total;
    e.genuine_ratio = plan.genuine_ratio;
    e.overlap_s = plan.overlap_s;
    e.sample_rate = r.audio.sample_rate();
    e.total_samples = r.audio.size();
    e.total_duration_s = r.audio.duration_s();
    e.clipped = r.clipped;
    e.seed = plan.seed;
    for (std::size_t i = 0; i < r.track.spans.size(); ++i) {
      const auto& span = r.track.spans[i];
      const SegmentMeta& m = meta.at({span.ref.clip_id, span.ref.variant});
      e.segments.push_back({span.ref.clip_id, span.label, plan.entries[i].speaker,
                            span.ref.variant, m.codec, m.noise, m.rir, m.applied_level_db,
                            span.start_sample, span.end_sample, span.start_s, span.end_s});
    }
    for (const auto& o : r.track.overlaps) e.overlaps.emplace_back(o.start_sample, o.end_sample);
  });

  Manifest manifest;
  manifest.header.master_seed = cfg.master_seed;
  manifest.header.config_hash = hex64(fnv1a64(fingerprint.dump()));
  manifest.header.partition = part;
  manifest.header.sample_rate = cfg.sample_rate;
  manifest.header.notes = {
      "source corpus sample rate assumed to be 16000 Hz; clips resampled to the pipeline rate",
      "utterance counts are generated directly rather than subsampled from a larger long-form set",
  };
  if (cfg.scale_divisor > 1) {
    manifest.header.notes.push_back("counts scaled by 1/" + std::to_string(cfg.scale_divisor));
  }
  manifest.entries = std::move(entries);
  check_partition(manifest);

  summary.manifest_path = part_dir / kManifestFile;
  write_manifest(manifest, summary.manifest_path);
  for (const auto& e : manifest.entries) {
    (e.label == SourceLabel::kGenuine ? summary.genuine : summary.spoof) += 1;
    summary.clipped += e.clipped;
  }
  log_line(cfg.verbose, "wrote " + summary.manifest_path.string());
  return summary;
}

// --- chunk ---

ChunkSummary run_chunk(const fs::path& partition_dir, double chunk_s, unsigned workers) {
  const Manifest manifest = read_manifest(partition_dir / kManifestFile);
  const fs::path chunk_dir = partition_dir / "chunks";
  fs::remove_all(chunk_dir);
  fs::create_directories(chunk_dir);
  ChunkSummary summary;
  summary.utterances = manifest.entries.size();
  summary.chunk_map = chunk_dir / kChunkMapFile;
  try {
    std::vector<std::vector<ChunkMapRow>> rows(manifest.entries.size());
    parallel_for(manifest.entries.size(), workers, [&](std::size_t i) {
      const auto& e = manifest.entries[i];
      const Waveform w = read_wav(partition_dir / "audio" / (e.utt_id + ".wav"));
      const auto bounds = chunk_bounds(w.size(), w.sample_rate(), chunk_s);
      for (std::size_t k = 0; k < bounds.size(); ++k) {
        const std::string id = e.utt_id + "_chunk" + std::to_string(k);
        write_wav(w.slice(bounds[k].first, bounds[k].second), chunk_dir / (id + ".wav"));
        rows[i].push_back({id, e.utt_id, k, bounds[k].first, bounds[k].second});
      }
    });
    std::ofstream map(summary.chunk_map, std::ios::binary | std::ios::trunc);
    if (!map) throw Error(Errc::kIoFailure, "cannot create " + summary.chunk_map.string());
    map << "chunk_id\tutt_id\tindex\tstart_sample\tend_sample\n";
    for (const auto& per_utt : rows) {
      for (const auto& r : per_utt) {
        map << r.chunk_id << '\t' << r.utt_id << '\t' << r.index << '\t' << r.start_sample
            << '\t' << r.end_sample << '\n';
        ++summary.chunks;
      }
    }
    map.flush();
    if (!map) throw Error(Errc::kIoFailure, "write failed: " + summary.chunk_map.string());
  } catch (...) {
    std::error_code ec;
    fs::remove_all(chunk_dir, ec);
    throw;
  }
  return summary;
}

std::vector<ChunkMapRow> read_chunk_map(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIoFailure, "cannot open chunk map " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "chunk_id\tutt_id\tindex\tstart_sample\tend_sample") {
    throw Error(Errc::kMalformedHeader, path.string() + " lacks the chunk map header");
  }
  std::vector<ChunkMapRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream f(line);
    ChunkMapRow r;
    if (!(f >> r.chunk_id >> r.utt_id >> r.index >> r.start_sample >> r.end_sample)) {
      throw Error(Errc::kMalformedLine, path.string() + ": line " + std::to_string(lineno));
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

// --- evaluate ---

EvaluateSummary run_evaluate(const EvaluateOptions& opts) {
  const Manifest manifest = read_manifest(opts.manifest);
  RawScores raw = read_score_file(opts.scores);
  if (opts.lower_is_genuine) {
    for (auto& row : raw.rows) row.second = -row.second;
  }

  EvaluateSummary summary;
  if (opts.chunk_map) {
    const auto chunks = read_chunk_map(*opts.chunk_map);
    std::unordered_map<std::string, std::string> chunk_to_utt;
    for (const auto& c : chunks) chunk_to_utt.emplace(c.chunk_id, c.utt_id);
    std::map<std::string, std::vector<double>> per_utt;
    std::vector<std::string> unknown;
    for (const auto& [id, score] : raw.rows) {
      const auto it = chunk_to_utt.find(id);
      if (it == chunk_to_utt.end()) {
        unknown.push_back(id);
        continue;
      }
      per_utt[it->second].push_back(score);
    }
    if (!unknown.empty()) {
      std::string list;
      for (std::size_t i = 0; i < unknown.size() && i < 20; ++i) list += (i ? " " : "") + unknown[i];
      throw Error(Errc::kUnknownUtterance,
                  std::to_string(unknown.size()) + " chunk id(s) not in chunk map: " + list);
    }
    if (!opts.allow_partial) {
      std::set<std::string> scored;
      for (const auto& [id, _] : raw.rows) scored.insert(id);
      std::vector<std::string> missing;
      for (const auto& c : chunks) {
        if (!scored.count(c.chunk_id)) missing.push_back(c.chunk_id);
      }
      if (!missing.empty()) {
        std::string list;
        for (std::size_t i = 0; i < missing.size() && i < 20; ++i) list += (i ? " " : "") + missing[i];
        throw Error(Errc::kMissingScores, std::to_string(missing.size()) + " chunk(s) unscored: " + list);
      }
    }
    RawScores merged;
    for (const auto& [utt, scores] : per_utt) merged.rows.emplace_back(utt, aggregate_scores(scores));
    raw = std::move(merged);
  }

  std::unordered_map<std::string, SourceLabel> labels;
  for (const auto& e : manifest.entries) labels.emplace(e.utt_id, e.label);
  const ScoreSet scores = join_labels(raw, labels);

  std::set<std::string> scored;
  for (const auto& r : scores.records) scored.insert(r.utt_id);
  for (const auto& e : manifest.entries) {
    if (!scored.count(e.utt_id)) summary.missing.push_back(e.utt_id);
  }
  if (!summary.missing.empty() && !opts.allow_partial) {
    std::string list;
    for (std::size_t i = 0; i < summary.missing.size() && i < 20; ++i) {
      list += (i ? " " : "") + summary.missing[i];
    }
    if (summary.missing.size() > 20) list += " ...";
    throw Error(Errc::kMissingScores,
                std::to_string(summary.missing.size()) + " utterance(s) unscored: " + list);
  }

  std::vector<int> expected;
  if (manifest.header.partition.longform) {
    for (const auto& r : manifest.header.partition.ratio_schedule) {
      if (r.m_genuine < manifest.header.partition.n_per_utt && r.count > 0) {
        expected.push_back(r.m_genuine);
      }
    }
  }
  // Partial runs can legitimately lack whole ratios.
  if (opts.allow_partial) expected.clear();

  summary.report.condition =
      opts.condition.empty() ? manifest.header.partition.name : opts.condition;
  summary.report.pooled = compute_eer(scores);
  if (opts.allow_partial) {
    // Restrict the breakdown to ratios that still have scored utterances.
    Manifest scored_only;
    scored_only.header = manifest.header;
    for (const auto& e : manifest.entries) {
      if (scored.count(e.utt_id)) scored_only.entries.push_back(e);
    }
    summary.report.rows = breakdown_by_ratio(scores, scored_only, expected);
  } else {
    summary.report.rows = breakdown_by_ratio(scores, manifest, expected);
  }

  try {
    emit_report({summary.report}, opts.report);
  } catch (...) {
    std::error_code ec;
    fs::remove(opts.report, ec);
    fs::remove(fs::path(opts.report.string() + ".plot.tsv"), ec);
    throw;
  }
  return summary;
}

// --- inspect ---

ojson inspect_manifest(const fs::path& path) {
  const Manifest m = read_manifest(path);
  ojson o;
  o["partition"] = m.header.partition.name;
  o["schema_version"] = m.header.schema_version;
  o["tool_version"] = m.header.tool_version;
  o["master_seed"] = m.header.master_seed;
  o["config_hash"] = m.header.config_hash;
  o["sample_rate"] = m.header.sample_rate;
  o["utterances"] = m.entries.size();
  std::size_t genuine = 0, clipped = 0;
  double total = 0.0, lo = 0.0, hi = 0.0;
  std::map<int, std::pair<std::string, std::size_t>> ratios;
  std::map<std::string, std::size_t> variants;
  std::set<std::string> speakers;
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    const auto& e = m.entries[i];
    if (e.label == SourceLabel::kGenuine) ++genuine;
    clipped += e.clipped;
    total += e.total_duration_s;
    lo = i == 0 ? e.total_duration_s : std::min(lo, e.total_duration_s);
    hi = i == 0 ? e.total_duration_s : std::max(hi, e.total_duration_s);
    auto& r = ratios[e.m_genuine];
    r.first = e.genuine_ratio;
    ++r.second;
    for (const auto& s : e.segments) {
      ++variants[std::string(to_string(s.variant))];
      speakers.insert(s.speaker);
    }
  }
  o["genuine"] = genuine;
  o["spoof"] = m.entries.size() - genuine;
  ojson by_ratio = ojson::object();
  for (const auto& [_, r] : ratios) by_ratio[r.first] = r.second;
  o["by_ratio"] = std::move(by_ratio);
  o["variants"] = variants;
  o["distinct_speakers"] = speakers.size();
  o["clipped_samples"] = clipped;
  ojson dur;
  dur["total_s"] = total;
  dur["mean_s"] = m.entries.empty() ? 0.0 : total / static_cast<double>(m.entries.size());
  dur["min_s"] = lo;
  dur["max_s"] = hi;
  o["duration"] = std::move(dur);
  return o;
}

}  // namespace lfs
