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

#include <numeric>
#include <unordered_set>

#include "fixtures.hpp"
#include "lfsynth/error.hpp"
#include "lfsynth/protocol.hpp"
#include "lfsynth/rng.hpp"

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

std::size_t count_for(const PartitionConfig& p, int m) {
  for (const auto& r : p.ratio_schedule) {
    if (r.m_genuine == m) return r.count;
  }
  return 0;
}

std::optional<std::string> maybe(Rng& rng, const std::string& s) {
  return rng.index(2) ? std::optional<std::string>(s) : std::nullopt;
}

Manifest random_manifest(Rng& rng) {
  Manifest m;
  m.header.master_seed = rng.next_u64();
  m.header.config_hash = "abc" + std::to_string(rng.index(1000));
  m.header.partition = builtin_partitions()[rng.index(8)];
  m.header.notes = {"note one", "ünïcode \"quoted\"\ttab"};
  const std::size_t n = rng.index(20);
  for (std::size_t i = 0; i < n; ++i) {
    ManifestEntry e;
    e.utt_id = "u" + std::to_string(i);
    e.n_total = 1 + static_cast<int>(rng.index(10));
    e.m_genuine = static_cast<int>(rng.index(static_cast<std::size_t>(e.n_total) + 1));
    e.label = e.m_genuine == e.n_total ? SourceLabel::kGenuine : SourceLabel::kSpoof;
    e.genuine_ratio = std::to_string(e.m_genuine) + ":" + std::to_string(e.n_total - e.m_genuine);
    e.overlap_s = rng.uniform(0, 0.2);
    e.total_samples = rng.index(1u << 20);
    e.total_duration_s = rng.uniform(0, 60);
    e.clipped = rng.index(5);
    e.seed = rng.next_u64();
    for (int k = 0; k < e.n_total; ++k) {
      SegmentRecord s;
      s.clip_id = "LA_" + std::to_string(rng.index(100000));
      s.source_label = k < e.m_genuine ? SourceLabel::kGenuine : SourceLabel::kSpoof;
      s.speaker = "LA_00" + std::to_string(rng.index(99));
      s.variant = kAllVariants[rng.index(4)];
      s.codec = maybe(rng, "g711a");
      s.noise = maybe(rng, "n.wav");
      s.rir = maybe(rng, "r.wav");
      s.applied_level_db = rng.uniform(-26, -18);
      s.start_sample = rng.index(100000);
      s.end_sample = s.start_sample + rng.index(100000);
      s.start_s = rng.uniform(0, 10);
      s.end_s = rng.uniform(10, 20);
      e.segments.push_back(s);
      if (k > 0) e.overlaps.emplace_back(s.start_sample, s.start_sample + 1600);
    }
    m.entries.push_back(std::move(e));
  }
  return m;
}

}  // namespace

TEST_CASE("builtin partitions") {
  const auto all = builtin_partitions();
  REQUIRE(all.size() == 8);
  const auto& t1 = find_partition(all, "train1");
  CHECK_FALSE(t1.process);
  CHECK_FALSE(t1.longform);
  CHECK(t1.n_genuine_utts == 2580);
  CHECK(t1.n_spoof_utts == 22800);
  const auto& t2 = find_partition(all, "train2");
  CHECK(t2.process);
  CHECK_FALSE(t2.longform);
  const auto& t3 = find_partition(all, "train3");
  CHECK(t3.longform);
  CHECK(t3.overlap_s == 0.0);
  CHECK(t3.n_genuine_utts == 2580);
  CHECK(t3.n_spoof_utts == 22800);
  const auto& t4 = find_partition(all, "train4");
  CHECK(t4.overlap_s == 0.1);
  CHECK(t4.n_genuine_utts == 2580);
  for (const auto* name : {"eval_raw_nooverlap", "eval_raw_overlap", "eval_processed_nooverlap",
                           "eval_processed_overlap"}) {
    const auto& e = find_partition(all, name);
    CHECK(e.longform);
    CHECK(e.n_genuine_utts == 10000);
    CHECK(e.n_spoof_utts == 20000);
    CHECK(e.n_per_utt == 10);
    for (int m = 0; m < 10; ++m) CHECK(count_for(e, m) == 2000);
    CHECK(count_for(e, 10) == 10000);
    CHECK(e.overlap_s == (std::string(name).find("_overlap") != std::string::npos ? 0.1 : 0.0));
    CHECK(e.process == (std::string(name).find("processed") != std::string::npos));
  }
  for (const auto& p : all) {
    CHECK_NOTHROW(p.validate());
    if (p.longform) {
      std::size_t spoof = 0;
      for (const auto& r : p.ratio_schedule) {
        if (r.m_genuine < p.n_per_utt) spoof += r.count;
      }
      CHECK(spoof == p.n_spoof_utts);
    }
  }
}

TEST_CASE("find_partition lists valid names") {
  try {
    find_partition(builtin_partitions(), "train9");
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kUnknownPartition);
    CHECK(std::string(e.what()).find("eval_processed_overlap") != std::string::npos);
  }
}

TEST_CASE("scale_partition") {
  const auto all = builtin_partitions();
  const auto s = scale_partition(find_partition(all, "eval_processed_overlap"), 100);
  CHECK(s.n_genuine_utts == 100);
  CHECK(s.n_spoof_utts == 200);
  for (int m = 0; m < 10; ++m) CHECK(count_for(s, m) == 20);
  CHECK_NOTHROW(s.validate());
  const auto t = scale_partition(find_partition(all, "train1"), 10);
  CHECK(t.n_genuine_utts == 258);
  CHECK(t.n_spoof_utts == 2280);
  CHECK(scale_partition(t, 1) == t);
  CHECK(code_of([&] { scale_partition(t, 0); }) == Errc::kConfigError);
}

TEST_CASE("PartitionConfig validation") {
  auto p = find_partition(builtin_partitions(), "train4");
  p.ratio_schedule[0].count += 1;
  CHECK(code_of([&] { p.validate(); }) == Errc::kConfigError);
  auto q = find_partition(builtin_partitions(), "train1");
  q.n_per_utt = 3;
  CHECK(code_of([&] { q.validate(); }) == Errc::kConfigError);
  auto r = find_partition(builtin_partitions(), "train4");
  r.overlap_s = -0.1;
  CHECK(code_of([&] { r.validate(); }) == Errc::kConfigError);
}

TEST_CASE("PartitionConfig JSON roundtrip") {
  for (const auto& p : builtin_partitions()) {
    nlohmann::ordered_json j = p;
    CHECK(j.get<PartitionConfig>() == p);
  }
}

TEST_CASE("derive_seed") {
  CHECK(derive_seed(1, "train3", 5) == derive_seed(1, "train3", 5));
  CHECK(derive_seed(1, "train3", 5) != derive_seed(1, "train4", 5));
  CHECK(derive_seed(1, "train3", 5) != derive_seed(2, "train3", 5));
  // Pinned values guard cross-platform stability.
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  Rng rng(1);
  for (int i = 0; i < 1000000; ++i) {
    const auto m = rng.next_u64();
    if (derive_seed(m, "eval", 1) == derive_seed(m, "eval", 2)) FAIL("collision at master " << m);
  }
  std::unordered_set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 200000; ++i) seen.insert(derive_seed(7, "train3", i));
  CHECK(seen.size() == 200000);
}

TEST_CASE("Rng::index is unbiased and in range") {
  Rng rng(3);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto k = rng.index(7);
    REQUIRE(k < 7);
    ++counts[k];
  }
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
  CHECK(code_of([&] { rng.index(0); }) == Errc::kInvalidArgument);
}

TEST_CASE("manifest roundtrip") {
  TempDir dir;
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    const Manifest m = random_manifest(rng);
    const auto p = dir.path() / "m.jsonl";
    write_manifest(m, p);
    CHECK(read_manifest(p) == m);
    const std::string first = lfs::testing::read_text(p);
    write_manifest(read_manifest(p), p);
    CHECK(lfs::testing::read_text(p) == first);
  }
}

TEST_CASE("manifest errors") {
  TempDir dir;
  const auto p = dir.path() / "m.jsonl";
  Manifest m;
  m.header.partition = builtin_partitions()[0];
  write_manifest(m, p);
  std::string text = lfs::testing::read_text(p);
  text.replace(text.find("\"schema_version\":1"), 18, "\"schema_version\":2");
  lfs::testing::write_text(p, text);
  CHECK(code_of([&] { read_manifest(p); }) == Errc::kSchemaMismatch);
  lfs::testing::write_text(p, "");
  CHECK(code_of([&] { read_manifest(p); }) == Errc::kEmptyFile);
  lfs::testing::write_text(p, "{oops\n");
  CHECK(code_of([&] { read_manifest(p); }) == Errc::kMalformedLine);
  CHECK(code_of([&] { read_manifest(dir.path() / "none"); }) == Errc::kIoFailure);
}

TEST_CASE("ASVspoof protocol parsing") {
  TempDir dir;
  const auto p = dir.path() / "proto.txt";
  lfs::testing::write_text(p,
                           "LA_0079 LA_T_1138215 - - bonafide\n"
                           "\n"
                           "LA_0079 LA_T_1271820 - A01 spoof\n");
  const auto rows = read_asvspoof_protocol(p);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].speaker == "LA_0079");
  CHECK(rows[0].utt_id == "LA_T_1138215");
  CHECK(rows[0].label == SourceLabel::kGenuine);
  CHECK(rows[1].system == "A01");
  CHECK(rows[1].label == SourceLabel::kSpoof);
  lfs::testing::write_text(p, "LA_0079 LA_T_1 - A01\n");
  CHECK(code_of([&] { read_asvspoof_protocol(p); }) == Errc::kMalformedLine);
  lfs::testing::write_text(p, "LA_0079 LA_T_1 - A01 fake\n");
  CHECK(code_of([&] { read_asvspoof_protocol(p); }) == Errc::kMalformedLine);
  CHECK(code_of([&] { read_asvspoof_protocol(dir.path() / "none"); }) == Errc::kIoFailure);
}
