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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "lfsynth/degrade.hpp"

namespace lfs {

inline constexpr int kManifestSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

struct RatioCount {
  int m_genuine = 0;
  std::size_t count = 0;

  friend bool operator==(const RatioCount&, const RatioCount&) = default;
};

struct PartitionConfig {
  std::string name;
  bool standardize = true;
  bool process = false;
  bool longform = false;
  double overlap_s = 0.0;
  std::size_t n_genuine_utts = 0;
  std::size_t n_spoof_utts = 0;
  int n_per_utt = 1;
  // Long-form only, ascending in M. Includes M = N for genuine utterances.
  std::vector<RatioCount> ratio_schedule;
  std::uint64_t master_seed = 0;

  void validate() const;

  friend bool operator==(const PartitionConfig&, const PartitionConfig&) = default;
};

// train1..train4 and the four evaluation configurations at full size.
std::vector<PartitionConfig> builtin_partitions();

// Divides every count by `divisor` (rounded to nearest), keeping the
// schedule and the genuine/spoof totals consistent.
PartitionConfig scale_partition(PartitionConfig config, std::size_t divisor);

const PartitionConfig& find_partition(const std::vector<PartitionConfig>& all,
                                      const std::string& name);

struct SegmentRecord {
  std::string clip_id;
  SourceLabel source_label = SourceLabel::kSpoof;
  std::string speaker;
  Variant variant = Variant::kOriginal;
  std::optional<std::string> codec;
  std::optional<std::string> noise;
  std::optional<std::string> rir;
  double applied_level_db = 0.0;
  std::size_t start_sample = 0;
  std::size_t end_sample = 0;
  double start_s = 0.0;
  double end_s = 0.0;

  friend bool operator==(const SegmentRecord&, const SegmentRecord&) = default;
};

struct ManifestEntry {
  std::string utt_id;
  SourceLabel label = SourceLabel::kSpoof;
  int m_genuine = 0;
  int n_total = 0;
  std::string genuine_ratio;
  double overlap_s = 0.0;
  int sample_rate = 16000;
  std::size_t total_samples = 0;
  double total_duration_s = 0.0;
  std::size_t clipped = 0;
  std::uint64_t seed = 0;
  std::vector<SegmentRecord> segments;
  // Sample ranges where two segments are summed.
  std::vector<std::pair<std::size_t, std::size_t>> overlaps;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct ManifestHeader {
  int schema_version = kManifestSchemaVersion;
  std::string tool_version = kToolVersion;
  std::uint64_t master_seed = 0;
  std::string config_hash;
  PartitionConfig partition;
  int sample_rate = 16000;
  std::vector<std::string> notes;

  friend bool operator==(const ManifestHeader&, const ManifestHeader&) = default;
};

struct Manifest {
  ManifestHeader header;
  std::vector<ManifestEntry> entries;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

// Line-delimited JSON: header object on line 1, one entry per line after.
void write_manifest(const Manifest& manifest, const std::filesystem::path& path);
Manifest read_manifest(const std::filesystem::path& path);

std::string serialize_entry(const ManifestEntry& entry);
ManifestEntry parse_entry(const std::string& line);

void to_json(nlohmann::ordered_json& j, const PartitionConfig& p);
void from_json(const nlohmann::ordered_json& j, PartitionConfig& p);

// One row of an ASVspoof 2019 LA protocol file:
// "speaker utt_id system_id attack_label key".
struct ProtocolRow {
  std::string speaker;
  std::string utt_id;
  std::string system;
  SourceLabel label = SourceLabel::kSpoof;
};

std::vector<ProtocolRow> read_asvspoof_protocol(const std::filesystem::path& path);

}  // namespace lfs
