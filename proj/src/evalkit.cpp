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

#include "lfsynth/evalkit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "lfsynth/error.hpp"

namespace lfs {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

bool parse_double(std::string_view text, double& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

}  // namespace

RawScores read_score_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIoFailure, "cannot open score file " + path.string());
  RawScores raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string id, value, extra;
    if (!(fields >> id)) continue;
    if (!(fields >> value) || (fields >> extra)) {
      throw Error(Errc::kMalformedLine, path.string() + ": line " + std::to_string(lineno) +
                                            ": expected 'utt_id score'");
    }
    double score = 0.0;
    if (!parse_double(value, score) || !std::isfinite(score)) {
      throw Error(Errc::kMalformedLine, path.string() + ": line " + std::to_string(lineno) +
                                            ": bad score '" + value + "'");
    }
    raw.rows.emplace_back(std::move(id), score);
  }
  if (raw.rows.empty()) throw Error(Errc::kEmptyFile, path.string() + " has no scores");
  return raw;
}

ScoreSet join_labels(const RawScores& raw,
                     const std::unordered_map<std::string, SourceLabel>& labels) {
  ScoreSet set;
  std::vector<std::string> unknown;
  std::set<std::string> seen;
  for (const auto& [id, score] : raw.rows) {
    if (!seen.insert(id).second) {
      throw Error(Errc::kMalformedLine, "duplicate score for '" + id + "'");
    }
    const auto it = labels.find(id);
    if (it == labels.end()) {
      unknown.push_back(id);
      continue;
    }
    set.records.push_back({id, score, it->second});
  }
  if (!unknown.empty()) {
    std::string list;
    for (std::size_t i = 0; i < unknown.size() && i < 20; ++i) list += (i ? " " : "") + unknown[i];
    if (unknown.size() > 20) list += " ...";
    throw Error(Errc::kUnknownUtterance,
                std::to_string(unknown.size()) + " id(s) not in manifest: " + list);
  }
  return set;
}

ScoreSet parse_scores(const std::filesystem::path& path, const Manifest& manifest) {
  std::unordered_map<std::string, SourceLabel> labels;
  for (const auto& e : manifest.entries) labels.emplace(e.utt_id, e.label);
  return join_labels(read_score_file(path), labels);
}

EerResult compute_eer(std::span<const double> genuine_in, std::span<const double> spoof_in) {
  if (genuine_in.empty() || spoof_in.empty()) {
    throw Error(Errc::kOneClassOnly,
                std::to_string(genuine_in.size()) + " genuine and " +
                    std::to_string(spoof_in.size()) + " spoof scores");
  }
  std::vector<double> genuine(genuine_in.begin(), genuine_in.end());
  std::vector<double> spoof(spoof_in.begin(), spoof_in.end());
  std::sort(genuine.begin(), genuine.end());
  std::sort(spoof.begin(), spoof.end());
  std::vector<double> thresholds;
  thresholds.reserve(genuine.size() + spoof.size() + 1);
  std::merge(genuine.begin(), genuine.end(), spoof.begin(), spoof.end(),
             std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  thresholds.push_back(std::numeric_limits<double>::infinity());

  const double ng = static_cast<double>(genuine.size());
  const double ns = static_cast<double>(spoof.size());
  EerResult r;
  r.n_genuine = genuine.size();
  r.n_spoof = spoof.size();

  std::size_t g_below = 0;  // genuine scores < t
  std::size_t s_below = 0;  // spoof scores < t
  double prev_far = 0.0, prev_frr = 0.0, prev_t = 0.0;
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double t = thresholds[i];
    while (g_below < genuine.size() && genuine[g_below] < t) ++g_below;
    while (s_below < spoof.size() && spoof[s_below] < t) ++s_below;
    const double far = static_cast<double>(spoof.size() - s_below) / ns;
    const double frr = static_cast<double>(g_below) / ng;
    if (far <= frr) {
      if (far == frr || i == 0) {
        r.eer = far;
        r.threshold = t;
        return r;
      }
      const double d_prev = prev_far - prev_frr;
      const double d = far - frr;
      const double alpha = d_prev / (d_prev - d);
      r.eer = prev_far + alpha * (far - prev_far);
      r.threshold = std::isfinite(t) ? prev_t + alpha * (t - prev_t) : prev_t;
      return r;
    }
    prev_far = far;
    prev_frr = frr;
    prev_t = t;
  }
  // Unreachable: at +inf FAR = 0 and FRR = 1.
  return r;
}

EerResult compute_eer(const ScoreSet& s) {
  std::vector<double> genuine, spoof;
  for (const auto& r : s.records) {
    (r.label == SourceLabel::kGenuine ? genuine : spoof).push_back(r.score);
  }
  return compute_eer(genuine, spoof);
}

std::vector<RatioEer> breakdown_by_ratio(const ScoreSet& s, const Manifest& manifest,
                                         const std::vector<int>& expected) {
  std::unordered_map<std::string, const ManifestEntry*> by_id;
  std::map<int, std::string> present;  // spoof ratios in the manifest
  for (const auto& e : manifest.entries) {
    by_id.emplace(e.utt_id, &e);
    if (e.label == SourceLabel::kSpoof) present.emplace(e.m_genuine, e.genuine_ratio);
  }
  std::vector<double> genuine;
  std::map<int, std::vector<double>> spoof_by_m;
  for (const auto& r : s.records) {
    const auto it = by_id.find(r.utt_id);
    if (it == by_id.end()) throw Error(Errc::kUnknownUtterance, r.utt_id);
    if (r.label == SourceLabel::kGenuine) {
      genuine.push_back(r.score);
    } else {
      spoof_by_m[it->second->m_genuine].push_back(r.score);
    }
  }
  for (int m : expected) {
    if (!spoof_by_m.count(m)) {
      throw Error(Errc::kMissingRatio, "no scored spoof utterances with M=" + std::to_string(m));
    }
  }
  std::vector<RatioEer> rows;
  for (const auto& [m, ratio] : present) {
    const auto it = spoof_by_m.find(m);
    if (it == spoof_by_m.end()) {
      throw Error(Errc::kMissingRatio, "no scored spoof utterances for ratio " + ratio);
    }
    rows.push_back({m, ratio, compute_eer(genuine, it->second)});
  }
  return rows;
}

std::vector<std::pair<std::size_t, std::size_t>> chunk_bounds(std::size_t length,
                                                              int sample_rate,
                                                              double chunk_s) {
  if (!(chunk_s > 0.0)) throw Error(Errc::kInvalidArgument, "chunk length must be positive");
  if (length == 0) throw Error(Errc::kEmptyInput, "nothing to chunk");
  const std::size_t chunk = std::max<std::size_t>(1, seconds_to_samples(chunk_s, sample_rate));
  const std::size_t min_tail = static_cast<std::size_t>(sample_rate);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t full = length / chunk;
  const std::size_t rem = length % chunk;
  if (full == 0) return {{0, length}};
  for (std::size_t k = 0; k < full; ++k) out.emplace_back(k * chunk, (k + 1) * chunk);
  if (rem >= min_tail) {
    out.emplace_back(full * chunk, length);
  } else if (rem > 0) {
    out.back().second = length;
  }
  return out;
}

std::vector<Waveform> chunk_audio(const Waveform& w, double chunk_s) {
  std::vector<Waveform> out;
  for (const auto& [b, e] : chunk_bounds(w.size(), w.sample_rate(), chunk_s)) {
    out.push_back(w.slice(b, e));
  }
  return out;
}

double aggregate_scores(std::span<const double> chunk_scores) {
  if (chunk_scores.empty()) throw Error(Errc::kEmptyList, "no chunk scores to average");
  double sum = 0.0;
  for (double s : chunk_scores) sum += s;
  return sum / static_cast<double>(chunk_scores.size());
}

void emit_report(const std::vector<ConditionReport>& tables,
                 const std::filesystem::path& path) {
  bool any = false;
  for (const auto& t : tables) any = any || !t.rows.empty();
  if (!any) throw Error(Errc::kEmptyInput, "no breakdown rows to report");

  std::ostringstream report;
  report << kReportHeader << '\n';
  std::map<int, std::string> ratios;
  for (const auto& t : tables) {
    auto row = [&](const std::string& ratio, const EerResult& r) {
      report << t.condition << '\t' << ratio << '\t' << format_double(r.eer) << '\t'
             << format_double(r.threshold) << '\t' << r.n_genuine << '\t' << r.n_spoof << '\n';
    };
    for (const auto& r : t.rows) {
      row(r.genuine_ratio, r.result);
      ratios.emplace(r.m_genuine, r.genuine_ratio);
    }
    row("pooled", t.pooled);
  }

  std::ostringstream plot;
  plot << "ratio_index\tgenuine_ratio";
  for (const auto& t : tables) plot << '\t' << t.condition;
  plot << '\n';
  for (const auto& [m, ratio] : ratios) {
    plot << m << '\t' << ratio;
    for (const auto& t : tables) {
      const auto it = std::find_if(t.rows.begin(), t.rows.end(),
                                   [m = m](const RatioEer& r) { return r.m_genuine == m; });
      plot << '\t' << (it == t.rows.end() ? std::string("NA") : format_double(it->result.eer));
    }
    plot << '\n';
  }

  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::kIoFailure, "cannot create " + p.string());
    out << text;
    out.flush();
    if (!out) throw Error(Errc::kIoFailure, "write failed: " + p.string());
  };
  write(path, report.str());
  write(std::filesystem::path(path.string() + ".plot.tsv"), plot.str());
}

std::vector<ReportRow> read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIoFailure, "cannot open report " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kReportHeader) {
    throw Error(Errc::kMalformedHeader, path.string() + " lacks the report header");
  }
  std::vector<ReportRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    ReportRow r;
    bool ok = f.size() == 6 && parse_double(f[2], r.eer) && parse_double(f[3], r.threshold);
    if (ok) {
      r.condition = f[0];
      r.genuine_ratio = f[1];
      r.n_genuine = std::stoul(f[4]);
      r.n_spoof = std::stoul(f[5]);
      rows.push_back(std::move(r));
    } else {
      throw Error(Errc::kMalformedLine, path.string() + ": line " + std::to_string(lineno));
    }
  }
  return rows;
}

}  // namespace lfs
