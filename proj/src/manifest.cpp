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

#include <fstream>
#include <string>

#include "lfsynth/error.hpp"
#include "lfsynth/protocol.hpp"

namespace lfs {

using ojson = nlohmann::ordered_json;

namespace {

ojson optional_string(const std::optional<std::string>& s) {
  return s ? ojson(*s) : ojson(nullptr);
}

std::optional<std::string> read_optional(const ojson& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

ojson segment_json(const SegmentRecord& s) {
  ojson o;
  o["clip_id"] = s.clip_id;
  o["source_label"] = to_string(s.source_label);
  o["speaker"] = s.speaker;
  o["variant"] = to_string(s.variant);
  o["codec"] = optional_string(s.codec);
  o["noise"] = optional_string(s.noise);
  o["rir"] = optional_string(s.rir);
  o["applied_level_db"] = s.applied_level_db;
  o["start_sample"] = s.start_sample;
  o["end_sample"] = s.end_sample;
  o["start_s"] = s.start_s;
  o["end_s"] = s.end_s;
  return o;
}

SegmentRecord segment_from(const ojson& o) {
  SegmentRecord s;
  s.clip_id = o.at("clip_id").get<std::string>();
  s.source_label = parse_source_label(o.at("source_label").get<std::string>());
  s.speaker = o.at("speaker").get<std::string>();
  s.variant = parse_variant(o.at("variant").get<std::string>());
  s.codec = read_optional(o, "codec");
  s.noise = read_optional(o, "noise");
  s.rir = read_optional(o, "rir");
  s.applied_level_db = o.at("applied_level_db").get<double>();
  s.start_sample = o.at("start_sample").get<std::size_t>();
  s.end_sample = o.at("end_sample").get<std::size_t>();
  s.start_s = o.at("start_s").get<double>();
  s.end_s = o.at("end_s").get<double>();
  return s;
}

ojson header_json(const ManifestHeader& h) {
  ojson o;
  o["schema_version"] = h.schema_version;
  o["tool_version"] = h.tool_version;
  o["master_seed"] = h.master_seed;
  o["config_hash"] = h.config_hash;
  o["sample_rate"] = h.sample_rate;
  o["partition"] = h.partition;
  o["notes"] = h.notes;
  return o;
}

ManifestHeader header_from(const ojson& o) {
  ManifestHeader h;
  h.schema_version = o.at("schema_version").get<int>();
  if (h.schema_version != kManifestSchemaVersion) {
    throw Error(Errc::kSchemaMismatch,
                "manifest schema version " + std::to_string(h.schema_version) +
                    ", this build reads version " + std::to_string(kManifestSchemaVersion));
  }
  h.tool_version = o.at("tool_version").get<std::string>();
  h.master_seed = o.at("master_seed").get<std::uint64_t>();
  h.config_hash = o.at("config_hash").get<std::string>();
  h.sample_rate = o.at("sample_rate").get<int>();
  h.partition = o.at("partition").get<PartitionConfig>();
  h.notes = o.at("notes").get<std::vector<std::string>>();
  return h;
}

}  // namespace

std::string serialize_entry(const ManifestEntry& e) {
  ojson o;
  o["utt_id"] = e.utt_id;
  o["label"] = to_string(e.label);
  o["m_genuine"] = e.m_genuine;
  o["n_total"] = e.n_total;
  o["genuine_ratio"] = e.genuine_ratio;
  o["overlap_s"] = e.overlap_s;
  o["sample_rate"] = e.sample_rate;
  o["total_samples"] = e.total_samples;
  o["total_duration_s"] = e.total_duration_s;
  o["clipped"] = e.clipped;
  o["seed"] = e.seed;
  ojson segs = ojson::array();
  for (const auto& s : e.segments) segs.push_back(segment_json(s));
  o["segments"] = std::move(segs);
  ojson ovl = ojson::array();
  for (const auto& [b, end] : e.overlaps) ovl.push_back(ojson::array({b, end}));
  o["overlaps"] = std::move(ovl);
  return o.dump();
}

ManifestEntry parse_entry(const std::string& line) {
  const ojson o = ojson::parse(line);
  ManifestEntry e;
  e.utt_id = o.at("utt_id").get<std::string>();
  e.label = parse_source_label(o.at("label").get<std::string>());
  e.m_genuine = o.at("m_genuine").get<int>();
  e.n_total = o.at("n_total").get<int>();
  e.genuine_ratio = o.at("genuine_ratio").get<std::string>();
  e.overlap_s = o.at("overlap_s").get<double>();
  e.sample_rate = o.at("sample_rate").get<int>();
  e.total_samples = o.at("total_samples").get<std::size_t>();
  e.total_duration_s = o.at("total_duration_s").get<double>();
  e.clipped = o.at("clipped").get<std::size_t>();
  e.seed = o.at("seed").get<std::uint64_t>();
  for (const auto& s : o.at("segments")) e.segments.push_back(segment_from(s));
  for (const auto& r : o.at("overlaps")) {
    e.overlaps.emplace_back(r.at(0).get<std::size_t>(), r.at(1).get<std::size_t>());
  }
  return e;
}

void write_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIoFailure, "cannot create manifest " + path.string());
  out << header_json(manifest.header).dump() << '\n';
  for (const auto& e : manifest.entries) out << serialize_entry(e) << '\n';
  out.flush();
  if (!out) throw Error(Errc::kIoFailure, "write failed: " + path.string());
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoFailure, "cannot open manifest " + path.string());
  Manifest m;
  std::string line;
  std::size_t lineno = 0;
  try {
    if (!std::getline(in, line)) throw Error(Errc::kEmptyFile, path.string() + " is empty");
    ++lineno;
    m.header = header_from(ojson::parse(line));
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      m.entries.push_back(parse_entry(line));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kMalformedLine,
                path.string() + ":" + std::to_string(lineno) + ": " + e.what());
  }
  return m;
}

}  // namespace lfs
