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

// lfsynth command-line front end. Links only the C interface.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lfsynth/lfsynth.h"

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kUsage = 2, kData = 3 };

int exit_code_for(lfs_status s) {
  switch (s) {
    case LFS_OK:
      return kOk;
    case LFS_INVALID_ARGUMENT:
    case LFS_CONFIG_ERROR:
    case LFS_UNKNOWN_PARTITION:
    case LFS_INVALID_RATE:
      return kUsage;
    case LFS_MISSING_SCORES:
    case LFS_UNKNOWN_UTTERANCE:
    case LFS_INSUFFICIENT_POOL:
    case LFS_INVALID_COUNTS:
    case LFS_MISSING_SEGMENT:
    case LFS_SCHEMA_MISMATCH:
    case LFS_MALFORMED_LINE:
    case LFS_MALFORMED_HEADER:
    case LFS_EMPTY_FILE:
    case LFS_ONE_CLASS_ONLY:
    case LFS_MISSING_RATIO:
    case LFS_RATE_MISMATCH:
    case LFS_EMPTY_LIST:
    case LFS_EMPTY_INPUT:
      return kData;
    default:
      return kInternal;
  }
}

int report(lfs_status s) {
  if (s != LFS_OK) std::cerr << "lfsynth: error: " << lfs_last_error() << '\n';
  return exit_code_for(s);
}

// Takes ownership of a C string from the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  lfs_string_free(s);
  return out;
}

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string pool;
  std::optional<unsigned> workers;
  std::string codec_registry;
  std::optional<std::size_t> scale;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--workers", o.workers, "worker threads (0 = all cores)");
  cmd->add_flag("-q,--quiet", o.quiet, "suppress progress output");
}

// Builds the effective config and logs it to stderr.
lfs_status build_config(const Overrides& o, lfs_config** cfg) {
  lfs_status s = o.config.empty() ? lfs_config_new(cfg) : lfs_config_load(o.config.c_str(), cfg);
  if (s != LFS_OK) return s;
  if (o.seed) s = lfs_config_set_seed(*cfg, *o.seed);
  if (s == LFS_OK && !o.output.empty()) s = lfs_config_set_output_dir(*cfg, o.output.c_str());
  if (s == LFS_OK && !o.pool.empty()) s = lfs_config_set_pool_dir(*cfg, o.pool.c_str());
  if (s == LFS_OK && o.workers) s = lfs_config_set_workers(*cfg, *o.workers);
  if (s == LFS_OK && !o.codec_registry.empty()) {
    s = lfs_config_set_codec_registry(*cfg, o.codec_registry.c_str());
  }
  if (s == LFS_OK && o.scale) s = lfs_config_set_scale(*cfg, *o.scale);
  if (s == LFS_OK && o.quiet) s = lfs_config_set_verbose(*cfg, 0);
  if (s != LFS_OK) return s;
  char* json = nullptr;
  s = lfs_config_to_json(*cfg, &json);
  if (s == LFS_OK && !o.quiet) std::cerr << "[lfsynth] effective config: " << take(json) << '\n';
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lfsynth: long-form spoofing dataset synthesis and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", lfs_version());
  app.footer(
      "Exit codes: 0 success, 1 internal error, 2 usage or configuration error,\n"
      "3 data-consistency error.");

  Overrides ov;

  std::string src_dir, protocol, out_dir;
  auto* standardize = app.add_subcommand("standardize", "trim and level-randomize a clip corpus");
  add_common(standardize, ov);
  standardize->add_option("--src", src_dir, "directory of <utt_id>.wav clips")->required();
  standardize->add_option("--protocol", protocol, "ASVspoof-style protocol file")->required();
  standardize->add_option("--out", out_dir, "output pool directory")->required();

  std::string partition;
  bool list_partitions = false;
  auto* generate = app.add_subcommand("generate", "render a partition and its manifest");
  add_common(generate, ov);
  generate->add_option("partition", partition, "partition name");
  generate->add_flag("--list", list_partitions, "print partition names and exit");
  generate->add_option("-o,--output", ov.output, "output directory");
  generate->add_option("--pool", ov.pool, "standardized pool directory");
  generate->add_option("--codec-registry", ov.codec_registry, "codec registry JSON");
  generate->add_option("--scale", ov.scale, "divide all utterance counts by this")
      ->check(CLI::PositiveNumber);

  std::string partition_dir;
  double chunk_s = 4.0;
  unsigned chunk_workers = 0;
  auto* chunk = app.add_subcommand("chunk", "split a partition into fixed-length chunks");
  chunk->add_option("partition_dir", partition_dir, "generated partition directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  chunk->add_option("--chunk-s", chunk_s, "chunk length in seconds")->check(CLI::PositiveNumber);
  chunk->add_option("--workers", chunk_workers, "worker threads (0 = all cores)");

  std::string scores, manifest, report_path, polarity = "higher", aggregate, condition;
  bool allow_partial = false;
  auto* evaluate = app.add_subcommand("evaluate", "EER report from countermeasure scores");
  evaluate->add_option("--scores", scores, "score file: '<id> <score>' per line")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--manifest", manifest, "partition manifest")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--report", report_path, "output report TSV")->required();
  evaluate->add_option("--polarity", polarity, "which scores mean genuine")
      ->check(CLI::IsMember({"higher", "lower"}));
  evaluate->add_option("--aggregate", aggregate, "chunk map: average chunk scores per utterance")
      ->check(CLI::ExistingFile);
  evaluate->add_flag("--allow-partial", allow_partial, "tolerate unscored utterances");
  evaluate->add_option("--condition", condition, "condition label in the report");

  std::string inspect_manifest;
  auto* inspect = app.add_subcommand("inspect", "print manifest statistics as JSON");
  inspect->add_option("manifest", inspect_manifest, "manifest path")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  lfs_config* cfg = nullptr;
  lfs_status s = LFS_OK;
  char* out = nullptr;

  if (*standardize) {
    s = build_config(ov, &cfg);
    if (s == LFS_OK) {
      s = lfs_run_standardize(cfg, src_dir.c_str(), protocol.c_str(), out_dir.c_str(), &out);
    }
    if (s == LFS_OK) {
      std::cout << take(out) << '\n';
    }
  } else if (*generate) {
    s = build_config(ov, &cfg);
    if (s == LFS_OK && (list_partitions || partition.empty())) {
      s = lfs_partition_names(cfg, &out);
      if (s == LFS_OK) std::cout << take(out);
      if (s == LFS_OK && !list_partitions) {
        std::cerr << "lfsynth: error: no partition given\n";
        lfs_config_free(cfg);
        return kUsage;
      }
    } else if (s == LFS_OK) {
      s = lfs_run_generate(cfg, partition.c_str(), &out);
      if (s == LFS_OK) std::cout << take(out) << '\n';
    }
  } else if (*chunk) {
    s = lfs_run_chunk(partition_dir.c_str(), chunk_s, chunk_workers, &out);
    if (s == LFS_OK) std::cout << take(out) << '\n';
  } else if (*evaluate) {
    lfs_evaluate_options o{};
    o.scores = scores.c_str();
    o.manifest = manifest.c_str();
    o.report = report_path.c_str();
    o.lower_is_genuine = polarity == "lower";
    o.chunk_map = aggregate.empty() ? nullptr : aggregate.c_str();
    o.allow_partial = allow_partial;
    o.condition = condition.empty() ? nullptr : condition.c_str();
    s = lfs_run_evaluate(&o, &out);
    if (s == LFS_OK) std::cout << take(out) << '\n';
  } else if (*inspect) {
    s = lfs_inspect(inspect_manifest.c_str(), &out);
    if (s == LFS_OK) std::cout << take(out) << '\n';
  }
  lfs_config_free(cfg);
  return report(s);
}
