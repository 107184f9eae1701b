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

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lfsynth/audio.hpp"
#include "lfsynth/degrade.hpp"
#include "lfsynth/protocol.hpp"

namespace lfs {

struct ScoreRecord {
  std::string utt_id;
  double score = 0.0;
  SourceLabel label = SourceLabel::kSpoof;
};

struct ScoreSet {
  std::vector<ScoreRecord> records;
};

// "utt_id score" lines, whitespace separated.
struct RawScores {
  std::vector<std::pair<std::string, double>> rows;
};

RawScores read_score_file(const std::filesystem::path& path);

// Joins raw scores to manifest labels. Throws UnknownUtterance listing every
// id absent from the label map.
ScoreSet join_labels(const RawScores& raw,
                     const std::unordered_map<std::string, SourceLabel>& labels);

ScoreSet parse_scores(const std::filesystem::path& path, const Manifest& manifest);

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
  std::size_t n_genuine = 0;
  std::size_t n_spoof = 0;
};

// Higher score = more genuine. FAR(t) = share of spoof scores >= t,
// FRR(t) = share of genuine scores < t, swept over every distinct score
// plus +inf. EER is taken at the first operating point where FAR <= FRR;
// without an exact tie it is linearly interpolated between that point and
// the previous one.
EerResult compute_eer(std::span<const double> genuine, std::span<const double> spoof);
EerResult compute_eer(const ScoreSet& s);

struct RatioEer {
  int m_genuine = 0;
  std::string genuine_ratio;
  EerResult result;
};

// One row per spoof genuine-ratio present in the manifest: all genuine
// utterances versus spoof utterances of that ratio only. If `expected` is
// non-empty, every listed M must have spoof utterances in the score set.
std::vector<RatioEer> breakdown_by_ratio(const ScoreSet& s, const Manifest& manifest,
                                         const std::vector<int>& expected = {});

// Consecutive chunks of chunk_s; a remainder of at least 1 s is its own
// chunk, a shorter one is merged into the previous chunk.
std::vector<Waveform> chunk_audio(const Waveform& w, double chunk_s = 4.0);

// Chunk boundaries (begin, end) in samples for a signal of `length`.
std::vector<std::pair<std::size_t, std::size_t>> chunk_bounds(std::size_t length,
                                                              int sample_rate,
                                                              double chunk_s = 4.0);

double aggregate_scores(std::span<const double> chunk_scores);

struct ConditionReport {
  std::string condition;
  EerResult pooled;
  std::vector<RatioEer> rows;
};

// Writes `path` (per-ratio rows plus a pooled row per condition, tab
// separated) and `path` + ".plot.tsv" (ratio index vs EER, one column per
// condition).
void emit_report(const std::vector<ConditionReport>& tables,
                 const std::filesystem::path& path);

struct ReportRow {
  std::string condition;
  std::string genuine_ratio;
  double eer = 0.0;
  double threshold = 0.0;
  std::size_t n_genuine = 0;
  std::size_t n_spoof = 0;
};

std::vector<ReportRow> read_report(const std::filesystem::path& path);

inline constexpr const char* kReportHeader =
    "condition\tgenuine_ratio\teer\tthreshold\tn_genuine\tn_spoof";

}  // namespace lfs
