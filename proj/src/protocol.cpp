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

#include "lfsynth/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "lfsynth/error.hpp"

namespace lfs {

namespace {

constexpr int kSegmentsPerUtterance = 10;
constexpr double kOverlapSeconds = 0.1;
constexpr std::size_t kTrainGenuine = 2580;
constexpr std::size_t kTrainSpoof = 22800;
constexpr std::size_t kEvalGenuine = 10000;
constexpr std::size_t kEvalSpoof = 20000;

// Spoof utterances split evenly over ratios 0:N .. (N-1):1, genuine at N:0.
std::vector<RatioCount> uniform_schedule(int n, std::size_t genuine, std::size_t spoof) {
  std::vector<RatioCount> out;
  for (int m = 0; m < n; ++m) {
    out.push_back({m, spoof / n + (static_cast<std::size_t>(m) < spoof % n ? 1 : 0)});
  }
  out.push_back({n, genuine});
  return out;
}

PartitionConfig shortform(std::string name, bool process) {
  PartitionConfig p;
  p.name = std::move(name);
  p.process = process;
  p.n_genuine_utts = kTrainGenuine;
  p.n_spoof_utts = kTrainSpoof;
  p.n_per_utt = 1;
  return p;
}

PartitionConfig longform(std::string name, bool process, double overlap_s,
                         std::size_t genuine, std::size_t spoof) {
  PartitionConfig p;
  p.name = std::move(name);
  p.process = process;
  p.longform = true;
  p.overlap_s = overlap_s;
  p.n_genuine_utts = genuine;
  p.n_spoof_utts = spoof;
  p.n_per_utt = kSegmentsPerUtterance;
  p.ratio_schedule = uniform_schedule(kSegmentsPerUtterance, genuine, spoof);
  return p;
}

}  // namespace

void PartitionConfig::validate() const {
  if (name.empty()) throw Error(Errc::kConfigError, "partition without a name");
  if (n_per_utt <= 0) throw Error(Errc::kConfigError, name + ": n_per_utt must be positive");
  if (!(overlap_s >= 0.0)) throw Error(Errc::kConfigError, name + ": negative overlap");
  if (!longform) {
    if (!ratio_schedule.empty()) {
      throw Error(Errc::kConfigError, name + ": short-form partitions take no ratio schedule");
    }
    if (n_per_utt != 1) throw Error(Errc::kConfigError, name + ": short-form needs n_per_utt = 1");
    return;
  }
  std::size_t total = 0;
  for (const auto& r : ratio_schedule) {
    if (r.m_genuine < 0 || r.m_genuine > n_per_utt) {
      throw Error(Errc::kConfigError, name + ": ratio M out of range");
    }
    total += r.count;
  }
  if (total != n_genuine_utts + n_spoof_utts) {
    throw Error(Errc::kConfigError,
                name + ": ratio schedule sums to " + std::to_string(total) + ", expected " +
                    std::to_string(n_genuine_utts + n_spoof_utts));
  }
  std::size_t genuine = 0;
  for (const auto& r : ratio_schedule) {
    if (r.m_genuine == n_per_utt) genuine += r.count;
  }
  if (genuine != n_genuine_utts) {
    throw Error(Errc::kConfigError, name + ": genuine schedule count does not match n_genuine_utts");
  }
}

std::vector<PartitionConfig> builtin_partitions() {
  std::vector<PartitionConfig> out;
  out.push_back(shortform("train1", false));
  out.push_back(shortform("train2", true));
  out.push_back(longform("train3", true, 0.0, kTrainGenuine, kTrainSpoof));
  out.push_back(longform("train4", true, kOverlapSeconds, kTrainGenuine, kTrainSpoof));
  out.push_back(longform("eval_raw_nooverlap", false, 0.0, kEvalGenuine, kEvalSpoof));
  out.push_back(longform("eval_raw_overlap", false, kOverlapSeconds, kEvalGenuine, kEvalSpoof));
  out.push_back(longform("eval_processed_nooverlap", true, 0.0, kEvalGenuine, kEvalSpoof));
  out.push_back(longform("eval_processed_overlap", true, kOverlapSeconds, kEvalGenuine, kEvalSpoof));
  return out;
}

PartitionConfig scale_partition(PartitionConfig config, std::size_t divisor) {
  if (divisor == 0) throw Error(Errc::kConfigError, "scale divisor must be positive");
  if (divisor == 1) return config;
  auto scaled = [divisor](std::size_t n) { return (n + divisor / 2) / divisor; };
  if (!config.longform) {
    config.n_genuine_utts = scaled(config.n_genuine_utts);
    config.n_spoof_utts = scaled(config.n_spoof_utts);
    return config;
  }
  config.n_genuine_utts = 0;
  config.n_spoof_utts = 0;
  for (auto& r : config.ratio_schedule) {
    r.count = scaled(r.count);
    (r.m_genuine == config.n_per_utt ? config.n_genuine_utts : config.n_spoof_utts) += r.count;
  }
  return config;
}

const PartitionConfig& find_partition(const std::vector<PartitionConfig>& all,
                                      const std::string& name) {
  for (const auto& p : all) {
    if (p.name == name) return p;
  }
  std::string names;
  for (const auto& p : all) names += (names.empty() ? "" : ", ") + p.name;
  throw Error(Errc::kUnknownPartition, "'" + name + "'; valid partitions: " + names);
}

void to_json(nlohmann::ordered_json& j, const PartitionConfig& p) {
  auto& o = j;
  o = nlohmann::ordered_json::object();
  o["name"] = p.name;
  o["standardize"] = p.standardize;
  o["process"] = p.process;
  o["longform"] = p.longform;
  o["overlap_s"] = p.overlap_s;
  o["n_genuine_utts"] = p.n_genuine_utts;
  o["n_spoof_utts"] = p.n_spoof_utts;
  o["n_per_utt"] = p.n_per_utt;
  if (p.longform) {
    nlohmann::ordered_json sched = nlohmann::ordered_json::object();
    for (const auto& r : p.ratio_schedule) {
      sched[std::to_string(r.m_genuine) + ":" + std::to_string(p.n_per_utt - r.m_genuine)] = r.count;
    }
    o["ratio_schedule"] = sched;
  }
  o["master_seed"] = p.master_seed;
}

void from_json(const nlohmann::ordered_json& j, PartitionConfig& p) {
  p.name = j.at("name").get<std::string>();
  p.standardize = j.value("standardize", true);
  p.process = j.value("process", false);
  p.longform = j.value("longform", false);
  p.overlap_s = j.value("overlap_s", 0.0);
  p.n_genuine_utts = j.at("n_genuine_utts").get<std::size_t>();
  p.n_spoof_utts = j.at("n_spoof_utts").get<std::size_t>();
  p.n_per_utt = j.value("n_per_utt", p.longform ? kSegmentsPerUtterance : 1);
  p.master_seed = j.value("master_seed", std::uint64_t{0});
  p.ratio_schedule.clear();
  if (j.contains("ratio_schedule")) {
    for (const auto& [key, count] : j.at("ratio_schedule").items()) {
      const auto colon = key.find(':');
      if (colon == std::string::npos) {
        throw Error(Errc::kConfigError, "ratio key '" + key + "' is not M:K");
      }
      p.ratio_schedule.push_back({std::stoi(key.substr(0, colon)), count.get<std::size_t>()});
    }
    std::sort(p.ratio_schedule.begin(), p.ratio_schedule.end(),
              [](const RatioCount& a, const RatioCount& b) { return a.m_genuine < b.m_genuine; });
  }
}

std::vector<ProtocolRow> read_asvspoof_protocol(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIoFailure, "cannot read protocol file " + path.string());
  std::vector<ProtocolRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::vector<std::string> cols;
    for (std::string f; fields >> f;) cols.push_back(f);
    if (cols.empty()) continue;
    if (cols.size() < 5) {
      throw Error(Errc::kMalformedLine,
                  path.string() + ":" + std::to_string(lineno) + ": expected 5 columns");
    }
    ProtocolRow row;
    row.speaker = cols[0];
    row.utt_id = cols[1];
    row.system = cols[2] == "-" ? cols[3] : cols[2];
    const std::string& key = cols[4];
    if (key == "bonafide") {
      row.label = SourceLabel::kGenuine;
    } else if (key == "spoof") {
      row.label = SourceLabel::kSpoof;
    } else {
      throw Error(Errc::kMalformedLine, path.string() + ":" + std::to_string(lineno) +
                                            ": unknown key '" + key + "'");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace lfs
