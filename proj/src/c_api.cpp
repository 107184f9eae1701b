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

#define LFSYNTH_BUILDING 1
#include "lfsynth/lfsynth.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <utility>

#include "lfsynth/audio.hpp"
#include "lfsynth/degrade.hpp"
#include "lfsynth/error.hpp"
#include "lfsynth/evalkit.hpp"
#include "lfsynth/g711.hpp"
#include "lfsynth/pipeline.hpp"
#include "lfsynth/rng.hpp"
#include "lfsynth/standardize.hpp"

struct lfs_waveform {
  lfs::Waveform w;
};

struct lfs_config {
  lfs::PipelineConfig cfg;
};

namespace {

thread_local std::string g_last_error;

using ojson = nlohmann::ordered_json;

lfs_status fail(lfs_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

template <typename F>
lfs_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return LFS_OK;
  } catch (const lfs::Error& e) {
    return fail(static_cast<lfs_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(LFS_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LFS_INTERNAL, e.what());
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw lfs::Error(lfs::Errc::kInvalidArgument, std::string(what) + " is null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** dst, const ojson& j) {
  if (dst != nullptr) *dst = dup_string(j.dump());
}

lfs_waveform* wrap(lfs::Waveform w) { return new lfs_waveform{std::move(w)}; }

lfs::G711Law to_law(lfs_g711_law law) {
  switch (law) {
    case LFS_G711_ALAW: return lfs::G711Law::kALaw;
    case LFS_G711_ULAW: return lfs::G711Law::kMuLaw;
  }
  throw lfs::Error(lfs::Errc::kInvalidArgument, "unknown G.711 law");
}

}  // namespace

extern "C" {

const char* lfs_version(void) { return lfs::kToolVersion; }

const char* lfs_status_string(lfs_status status) {
  if (status == LFS_OK) return "Ok";
  if (status == LFS_INTERNAL) return "Internal";
  if (status < LFS_INVALID_ARGUMENT || status > LFS_MISSING_SCORES) return "Unknown";
  return lfs::errc_name(static_cast<lfs::Errc>(static_cast<int>(status))).data();
}

const char* lfs_last_error(void) { return g_last_error.c_str(); }

void lfs_string_free(char* s) { std::free(s); }

lfs_status lfs_waveform_create(const double* samples, size_t n, int sample_rate,
                               lfs_waveform** out) {
  return guarded([&] {
    require(out, "out");
    if (n > 0) require(samples, "samples");
    std::vector<double> v(samples, samples + n);
    *out = wrap(lfs::Waveform(std::move(v), sample_rate));
  });
}

lfs_status lfs_waveform_read(const char* path, lfs_waveform** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = wrap(lfs::read_wav(path));
  });
}

lfs_status lfs_waveform_write(const lfs_waveform* w, const char* path, size_t* clipped) {
  return guarded([&] {
    require(w, "waveform");
    require(path, "path");
    const std::size_t c = lfs::write_wav(w->w, path);
    if (clipped != nullptr) *clipped = c;
  });
}

void lfs_waveform_free(lfs_waveform* w) { delete w; }

size_t lfs_waveform_size(const lfs_waveform* w) { return w ? w->w.size() : 0; }

int lfs_waveform_rate(const lfs_waveform* w) { return w ? w->w.sample_rate() : 0; }

const double* lfs_waveform_data(const lfs_waveform* w) {
  return w ? w->w.samples().data() : nullptr;
}

lfs_status lfs_resample(const lfs_waveform* w, int target_rate, lfs_waveform** out) {
  return guarded([&] {
    require(w, "waveform");
    require(out, "out");
    *out = wrap(lfs::resample(w->w, target_rate));
  });
}

lfs_status lfs_trim_silence(const lfs_waveform* w, double threshold_db, double window_ms,
                            double pad_ms, lfs_waveform** out) {
  return guarded([&] {
    require(w, "waveform");
    require(out, "out");
    lfs::TrimParams p{threshold_db, window_ms, pad_ms};
    p.validate();
    *out = wrap(lfs::trim_silence(w->w, p));
  });
}

lfs_status lfs_active_speech_level(const lfs_waveform* w, double* level_db) {
  return guarded([&] {
    require(w, "waveform");
    require(level_db, "level_db");
    *level_db = lfs::active_speech_level(w->w).value;
  });
}

lfs_status lfs_rms_level(const lfs_waveform* w, double* level_db) {
  return guarded([&] {
    require(w, "waveform");
    require(level_db, "level_db");
    *level_db = lfs::rms_level_db(w->w).value;
  });
}

lfs_status lfs_g711_compand(const lfs_waveform* w, lfs_g711_law law, lfs_waveform** out) {
  return guarded([&] {
    require(w, "waveform");
    require(out, "out");
    *out = wrap(lfs::compand_g711(w->w, to_law(law)));
  });
}

lfs_status lfs_add_noise(const lfs_waveform* w, const lfs_waveform* noise, double snr_db,
                         uint64_t seed, lfs_waveform** out) {
  return guarded([&] {
    require(w, "waveform");
    require(noise, "noise");
    require(out, "out");
    lfs::Rng rng(seed);
    *out = wrap(lfs::add_noise(w->w, noise->w, snr_db, rng).audio);
  });
}

lfs_status lfs_apply_rir(const lfs_waveform* w, const lfs_waveform* rir, lfs_waveform** out) {
  return guarded([&] {
    require(w, "waveform");
    require(rir, "rir");
    require(out, "out");
    *out = wrap(lfs::apply_rir(w->w, rir->w));
  });
}

lfs_status lfs_overlap_add(const lfs_waveform* a, const lfs_waveform* b, double overlap_s,
                           lfs_waveform** out, size_t* clipped) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    lfs::ClampedWaveform r = lfs::overlap_add(a->w, b->w, overlap_s);
    if (clipped != nullptr) *clipped = r.clipped;
    *out = wrap(std::move(r.audio));
  });
}

lfs_status lfs_compute_eer(const double* genuine, size_t n_genuine, const double* spoof,
                           size_t n_spoof, double* eer, double* threshold) {
  return guarded([&] {
    if (n_genuine > 0) require(genuine, "genuine");
    if (n_spoof > 0) require(spoof, "spoof");
    require(eer, "eer");
    const lfs::EerResult r = lfs::compute_eer(std::span<const double>(genuine, n_genuine),
                                              std::span<const double>(spoof, n_spoof));
    *eer = r.eer;
    if (threshold != nullptr) *threshold = r.threshold;
  });
}

lfs_status lfs_chunk_bounds(size_t length, int sample_rate, double chunk_s, size_t* bounds,
                            size_t cap, size_t* n_chunks) {
  return guarded([&] {
    require(n_chunks, "n_chunks");
    if (cap > 0) require(bounds, "bounds");
    if (sample_rate <= 0) throw lfs::Error(lfs::Errc::kInvalidRate, "sample rate must be positive");
    const auto b = lfs::chunk_bounds(length, sample_rate, chunk_s);
    *n_chunks = b.size();
    for (std::size_t i = 0; i < b.size() && i < cap; ++i) {
      bounds[2 * i] = b[i].first;
      bounds[2 * i + 1] = b[i].second;
    }
  });
}

lfs_status lfs_config_new(lfs_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new lfs_config{};
  });
}

lfs_status lfs_config_load(const char* path, lfs_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new lfs_config{lfs::load_pipeline_config(path)};
  });
}

void lfs_config_free(lfs_config* cfg) { delete cfg; }

lfs_status lfs_config_set_seed(lfs_config* cfg, uint64_t seed) {
  return guarded([&] {
    require(cfg, "config");
    cfg->cfg.master_seed = seed;
  });
}

lfs_status lfs_config_set_pool_dir(lfs_config* cfg, const char* dir) {
  return guarded([&] {
    require(cfg, "config");
    require(dir, "dir");
    cfg->cfg.pool_dir = dir;
  });
}

lfs_status lfs_config_set_output_dir(lfs_config* cfg, const char* dir) {
  return guarded([&] {
    require(cfg, "config");
    require(dir, "dir");
    cfg->cfg.output_dir = dir;
  });
}

lfs_status lfs_config_set_workers(lfs_config* cfg, unsigned workers) {
  return guarded([&] {
    require(cfg, "config");
    cfg->cfg.workers = workers;
  });
}

lfs_status lfs_config_set_codec_registry(lfs_config* cfg, const char* path) {
  return guarded([&] {
    require(cfg, "config");
    require(path, "path");
    cfg->cfg.codec_registry = path;
  });
}

lfs_status lfs_config_set_scale(lfs_config* cfg, size_t divisor) {
  return guarded([&] {
    require(cfg, "config");
    if (divisor == 0) throw lfs::Error(lfs::Errc::kConfigError, "scale divisor must be positive");
    cfg->cfg.scale_divisor = divisor;
  });
}

lfs_status lfs_config_set_verbose(lfs_config* cfg, int verbose) {
  return guarded([&] {
    require(cfg, "config");
    cfg->cfg.verbose = verbose != 0;
  });
}

lfs_status lfs_config_to_json(const lfs_config* cfg, char** json) {
  return guarded([&] {
    require(cfg, "config");
    require(json, "json");
    emit(json, lfs::config_to_json(cfg->cfg));
  });
}

lfs_status lfs_partition_names(const lfs_config* cfg, char** names) {
  return guarded([&] {
    require(cfg, "config");
    require(names, "names");
    std::string out;
    for (const auto& p : lfs::effective_partitions(cfg->cfg)) out += p.name + "\n";
    *names = dup_string(out);
  });
}

lfs_status lfs_run_standardize(const lfs_config* cfg, const char* src_dir, const char* protocol,
                               const char* out_dir, char** summary) {
  return guarded([&] {
    require(cfg, "config");
    require(src_dir, "src_dir");
    require(protocol, "protocol");
    require(out_dir, "out_dir");
    const auto s = lfs::run_standardize(cfg->cfg, src_dir, protocol, out_dir);
    emit(summary, ojson{{"processed", s.processed}, {"skipped", s.skipped}});
  });
}

lfs_status lfs_run_generate(const lfs_config* cfg, const char* partition, char** summary) {
  return guarded([&] {
    require(cfg, "config");
    require(partition, "partition");
    const auto s = lfs::run_generate(cfg->cfg, partition);
    emit(summary, ojson{{"partition_dir", s.partition_dir.string()},
                        {"manifest", s.manifest_path.string()},
                        {"genuine", s.genuine},
                        {"spoof", s.spoof},
                        {"clipped_samples", s.clipped},
                        {"redraws", s.redraws},
                        {"failed_variants", s.failed_variants}});
  });
}

lfs_status lfs_run_chunk(const char* partition_dir, double chunk_s, unsigned workers,
                         char** summary) {
  return guarded([&] {
    require(partition_dir, "partition_dir");
    const auto s = lfs::run_chunk(partition_dir, chunk_s, workers);
    emit(summary, ojson{{"utterances", s.utterances},
                        {"chunks", s.chunks},
                        {"chunk_map", s.chunk_map.string()}});
  });
}

lfs_status lfs_run_evaluate(const lfs_evaluate_options* opts, char** summary) {
  return guarded([&] {
    require(opts, "options");
    require(opts->scores, "scores");
    require(opts->manifest, "manifest");
    require(opts->report, "report");
    lfs::EvaluateOptions o;
    o.scores = opts->scores;
    o.manifest = opts->manifest;
    o.report = opts->report;
    o.lower_is_genuine = opts->lower_is_genuine != 0;
    if (opts->chunk_map != nullptr) o.chunk_map = std::filesystem::path(opts->chunk_map);
    o.allow_partial = opts->allow_partial != 0;
    if (opts->condition != nullptr) o.condition = opts->condition;
    const auto s = lfs::run_evaluate(o);
    ojson rows = ojson::array();
    for (const auto& r : s.report.rows) {
      rows.push_back({{"genuine_ratio", r.genuine_ratio}, {"eer", r.result.eer}});
    }
    emit(summary, ojson{{"condition", s.report.condition},
                        {"pooled_eer", s.report.pooled.eer},
                        {"pooled_threshold", s.report.pooled.threshold},
                        {"rows", rows},
                        {"missing", s.missing}});
  });
}

lfs_status lfs_inspect(const char* manifest, char** json) {
  return guarded([&] {
    require(manifest, "manifest");
    require(json, "json");
    emit(json, lfs::inspect_manifest(manifest));
  });
}

}  // extern "C"
