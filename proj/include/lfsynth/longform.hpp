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
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lfsynth/audio.hpp"
#include "lfsynth/degrade.hpp"
#include "lfsynth/rng.hpp"

namespace lfs {

// genuine iff every segment is genuine.
SourceLabel label_of(int m_genuine, int n_total);

// "M:(N-M)", e.g. "3:7".
std::string genuine_ratio(int m_genuine, int n_total);

struct SegmentRef {
  std::string clip_id;
  Variant variant = Variant::kOriginal;

  friend bool operator==(const SegmentRef&, const SegmentRef&) = default;
};

struct PoolVariant {
  Variant variant = Variant::kOriginal;
  std::size_t length = 0;  // samples
};

struct PoolClip {
  std::string id;
  std::string speaker;
  SourceLabel label = SourceLabel::kSpoof;
  // Variants available for concatenation; never empty.
  std::vector<PoolVariant> variants;
};

// Index of segments available for planning, grouped by source label in
// insertion order.
class SegmentPool {
 public:
  explicit SegmentPool(int sample_rate) : sample_rate_(sample_rate) {}

  void add(PoolClip clip);

  int sample_rate() const { return sample_rate_; }
  const std::vector<PoolClip>& clips() const { return clips_; }
  const std::vector<std::size_t>& genuine() const { return genuine_; }
  const std::vector<std::size_t>& spoof() const { return spoof_; }

 private:
  int sample_rate_;
  std::vector<PoolClip> clips_;
  std::vector<std::size_t> genuine_;
  std::vector<std::size_t> spoof_;
};

struct PlanEntry {
  SegmentRef ref;
  SourceLabel source_label = SourceLabel::kSpoof;
  std::string speaker;
  std::size_t length = 0;
};

struct ConcatPlan {
  std::string utt_id;
  std::vector<PlanEntry> entries;
  int n_total = 0;
  int m_genuine = 0;
  double overlap_s = 0.0;
  std::uint64_t seed = 0;
  SourceLabel label = SourceLabel::kSpoof;
  std::string genuine_ratio;
  // Draws rejected because a segment was shorter than the overlap.
  int redraws = 0;
};

// Draws m genuine and n-m spoof clips without replacement, shuffles the
// sequence, then picks one available variant per clip. A draw that puts a
// segment shorter than the overlap into the utterance is rejected and
// redrawn from the same generator.
ConcatPlan plan_utterance(const SegmentPool& pool, int n, int m, double overlap_s,
                          Rng& rng);

struct BoundaryTrack {
  struct Span {
    SegmentRef ref;
    SourceLabel label = SourceLabel::kSpoof;
    std::size_t start_sample = 0;
    std::size_t end_sample = 0;
    double start_s = 0.0;
    double end_s = 0.0;
  };
  struct Region {
    std::size_t start_sample = 0;
    std::size_t end_sample = 0;
    double start_s = 0.0;
    double end_s = 0.0;
  };
  int sample_rate = 16000;
  std::vector<Span> spans;
  std::vector<Region> overlaps;
  std::size_t total_samples = 0;
};

// Span layout implied by segment lengths and a fixed overlap.
BoundaryTrack layout_boundaries(const std::vector<PlanEntry>& entries,
                                const std::vector<std::size_t>& lengths,
                                std::size_t overlap_samples, int sample_rate);

// Source of rendered segment audio.
using SegmentLoader = std::function<Waveform(const SegmentRef&)>;

struct RenderedUtterance {
  Waveform audio;
  BoundaryTrack track;
  std::size_t clipped = 0;
};

RenderedUtterance render(const ConcatPlan& plan, const SegmentLoader& load);

}  // namespace lfs
