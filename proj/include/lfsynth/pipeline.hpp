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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lfsynth/degrade.hpp"
#include "lfsynth/evalkit.hpp"
#include "lfsynth/protocol.hpp"
#include "lfsynth/standardize.hpp"

namespace lfs {

inline constexpr const char* kCodecRegistryEnv = "LFSYNTH_CODEC_REGISTRY";
inline constexpr const char* kStandardizeLog = "standardize_log.jsonl";
inline constexpr const char* kManifestFile = "manifest.jsonl";
inline constexpr const char* kChunkMapFile = "chunk_map.tsv";

struct PipelineConfig {
  std::uint64_t master_seed = 20240917;
  int sample_rate = 16000;
  TrimParams trim;
  LevelRange level;
  std::filesystem::path pool_dir;
  std::filesystem::path output_dir;
  std::filesystem::path codec_registry;
  NoiseSpec corpora;
  double codec_timeout_s = 120.0;
  // 0 means one worker per hardware thread.
  unsigned workers = 0;
  std::size_t scale_divisor = 1;
  // Added to, or replacing by name, the built-in partitions.
  std::vector<PartitionConfig> partitions;
  bool verbose = true;
};

// Reads a JSON config; relative paths resolve against the file's directory.
// Unknown keys are rejected.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

nlohmann::ordered_json config_to_json(const PipelineConfig& cfg);

// Built-ins merged with cfg.partitions, scaled, with master_seed filled in.
std::vector<PartitionConfig> effective_partitions(const PipelineConfig& cfg);

unsigned effective_workers(unsigned requested);

// Calls fn(i) for i in [0, n) on up to `workers` threads. The first
// exception thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

// One standardized clip as recorded in standardize_log.jsonl.
struct PoolLogEntry {
  std::string clip_id;
  std::string speaker;
  std::string system;
  SourceLabel label = SourceLabel::kSpoof;
  bool ok = false;
  std::string error;
  int sample_rate = 16000;
  std::size_t samples = 0;
  std::size_t trimmed_samples = 0;
  double active_level_db = 0.0;
  double rms_level_db = 0.0;
  double target_level_db = 0.0;
  bool rms_fallback = false;
  std::size_t clipped = 0;
};

std::vector<PoolLogEntry> read_pool_log(const std::filesystem::path& pool_dir);

struct StandardizeSummary {
  std::size_t processed = 0;
  std::vector<std::string> skipped;  // "clip_id: reason"
};

StandardizeSummary run_standardize(const PipelineConfig& cfg,
                                   const std::filesystem::path& src_dir,
                                   const std::filesystem::path& protocol,
                                   const std::filesystem::path& out_dir);

struct GenerateSummary {
  std::filesystem::path partition_dir;
  std::filesystem::path manifest_path;
  std::size_t genuine = 0;
  std::size_t spoof = 0;
  std::size_t clipped = 0;
  std::size_t redraws = 0;
  std::size_t failed_variants = 0;
};

GenerateSummary run_generate(const PipelineConfig& cfg, const std::string& partition);

struct ChunkSummary {
  std::size_t utterances = 0;
  std::size_t chunks = 0;
  std::filesystem::path chunk_map;
};

// Chunks every utterance of a generated partition into chunks/ with a
// tab-separated chunk map (chunk_id, utt_id, index, start_sample,
// end_sample).
ChunkSummary run_chunk(const std::filesystem::path& partition_dir, double chunk_s = 4.0,
                       unsigned workers = 1);

struct ChunkMapRow {
  std::string chunk_id;
  std::string utt_id;
  std::size_t index = 0;
  std::size_t start_sample = 0;
  std::size_t end_sample = 0;
};

std::vector<ChunkMapRow> read_chunk_map(const std::filesystem::path& path);

struct EvaluateOptions {
  std::filesystem::path scores;
  std::filesystem::path manifest;
  std::filesystem::path report;
  bool lower_is_genuine = false;
  std::optional<std::filesystem::path> chunk_map;
  bool allow_partial = false;
  std::string condition;  // defaults to the manifest's partition name
};

struct EvaluateSummary {
  ConditionReport report;
  std::vector<std::string> missing;  // unscored utterances (partial mode)
};

EvaluateSummary run_evaluate(const EvaluateOptions& opts);

// Partition statistics as a JSON document.
nlohmann::ordered_json inspect_manifest(const std::filesystem::path& manifest);

}  // namespace lfs
