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

#include "lfsynth/longform.hpp"

#include <algorithm>
#include <string>

#include "lfsynth/error.hpp"

namespace lfs {

namespace {

constexpr int kMaxPlanAttempts = 1000;

void check_counts(int m, int n) {
  if (n <= 0 || m < 0 || m > n) {
    throw Error(Errc::kInvalidCounts,
                "need 0 <= M <= N and N > 0, got M=" + std::to_string(m) +
                    " N=" + std::to_string(n));
  }
}

// First k items of a uniform random permutation of `from` (partial
// Fisher-Yates).
std::vector<std::size_t> draw_without_replacement(const std::vector<std::size_t>& from,
                                                  int k, Rng& rng) {
  std::vector<std::size_t> items(from);
  for (int i = 0; i < k; ++i) {
    const std::size_t j = static_cast<std::size_t>(i) + rng.index(items.size() - i);
    std::swap(items[i], items[j]);
  }
  items.resize(k);
  return items;
}

}  // namespace

SourceLabel label_of(int m_genuine, int n_total) {
  check_counts(m_genuine, n_total);
  return m_genuine == n_total ? SourceLabel::kGenuine : SourceLabel::kSpoof;
}

std::string genuine_ratio(int m_genuine, int n_total) {
  check_counts(m_genuine, n_total);
  return std::to_string(m_genuine) + ":" + std::to_string(n_total - m_genuine);
}

void SegmentPool::add(PoolClip clip) {
  if (clip.variants.empty()) {
    throw Error(Errc::kInvalidArgument, "pool clip '" + clip.id + "' has no variants");
  }
  const std::size_t idx = clips_.size();
  (clip.label == SourceLabel::kGenuine ? genuine_ : spoof_).push_back(idx);
  clips_.push_back(std::move(clip));
}

ConcatPlan plan_utterance(const SegmentPool& pool, int n, int m, double overlap_s,
                          Rng& rng) {
  check_counts(m, n);
  if (pool.genuine().size() < static_cast<std::size_t>(m) ||
      pool.spoof().size() < static_cast<std::size_t>(n - m)) {
    throw Error(Errc::kInsufficientPool,
                "need " + std::to_string(m) + " genuine and " + std::to_string(n - m) +
                    " spoof clips, pool has " + std::to_string(pool.genuine().size()) +
                    " and " + std::to_string(pool.spoof().size()));
  }
  const std::size_t overlap = seconds_to_samples(overlap_s, pool.sample_rate());

  ConcatPlan plan;
  plan.n_total = n;
  plan.m_genuine = m;
  plan.overlap_s = overlap_s;
  plan.label = label_of(m, n);
  plan.genuine_ratio = genuine_ratio(m, n);

  for (int attempt = 0; attempt < kMaxPlanAttempts; ++attempt) {
    std::vector<std::size_t> picks = draw_without_replacement(pool.genuine(), m, rng);
    const auto spoof = draw_without_replacement(pool.spoof(), n - m, rng);
    picks.insert(picks.end(), spoof.begin(), spoof.end());
    rng.shuffle(std::span<std::size_t>(picks));

    plan.entries.clear();
    bool too_short = false;
    for (std::size_t idx : picks) {
      const PoolClip& clip = pool.clips()[idx];
      const PoolVariant& v = clip.variants[rng.index(clip.variants.size())];
      plan.entries.push_back({{clip.id, v.variant}, clip.label, clip.speaker, v.length});
      if (n > 1 && v.length < overlap) too_short = true;
    }
    if (!too_short) return plan;
    ++plan.redraws;
  }
  throw Error(Errc::kInsufficientPool,
              "no draw without segments shorter than the overlap after " +
                  std::to_string(kMaxPlanAttempts) + " attempts");
}

BoundaryTrack layout_boundaries(const std::vector<PlanEntry>& entries,
                                const std::vector<std::size_t>& lengths,
                                std::size_t overlap_samples, int sample_rate) {
  BoundaryTrack track;
  track.sample_rate = sample_rate;
  const double rate = sample_rate;
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::size_t start = i == 0 ? 0 : cursor - overlap_samples;
    const std::size_t end = start + lengths[i];
    if (i > 0 && overlap_samples > 0) {
      track.overlaps.push_back({start, cursor, start / rate, cursor / rate});
    }
    track.spans.push_back({entries[i].ref, entries[i].source_label, start, end,
                           start / rate, end / rate});
    cursor = end;
  }
  track.total_samples = cursor;
  return track;
}

RenderedUtterance render(const ConcatPlan& plan, const SegmentLoader& load) {
  if (plan.entries.empty()) throw Error(Errc::kInvalidArgument, "empty plan " + plan.utt_id);
  RenderedUtterance out;
  std::vector<std::size_t> lengths;
  lengths.reserve(plan.entries.size());
  for (std::size_t i = 0; i < plan.entries.size(); ++i) {
    Waveform seg = load(plan.entries[i].ref);
    if (seg.size() != plan.entries[i].length) {
      throw Error(Errc::kMissingSegment,
                  plan.entries[i].ref.clip_id + " " + std::string(to_string(plan.entries[i].ref.variant)) +
                      ": expected " + std::to_string(plan.entries[i].length) + " samples, got " +
                      std::to_string(seg.size()));
    }
    lengths.push_back(seg.size());
    if (i == 0) {
      std::vector<double> first(seg.samples());
      out.clipped += clamp_in_place(first);
      out.audio = Waveform(std::move(first), seg.sample_rate());
      continue;
    }
    ClampedWaveform joined = overlap_add(out.audio, seg, plan.overlap_s);
    out.clipped += joined.clipped;
    out.audio = std::move(joined.audio);
  }
  const int rate = out.audio.sample_rate();
  out.track = layout_boundaries(plan.entries, lengths,
                                seconds_to_samples(plan.overlap_s, rate), rate);
  return out;
}

}  // namespace lfs
