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

/* C interface to the lfsynth library. Every function returns an lfs_status;
 * on failure lfs_last_error() describes the most recent error on the calling
 * thread. Strings returned through out-parameters are owned by the caller
 * and released with lfs_string_free. */
#ifndef LFSYNTH_LFSYNTH_H_
#define LFSYNTH_LFSYNTH_H_

#include <stddef.h>
#include <stdint.h>

#if defined(LFSYNTH_BUILDING)
#define LFS_API __attribute__((visibility("default")))
#else
#define LFS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lfs_status {
  LFS_OK = 0,
  LFS_INVALID_ARGUMENT,
  LFS_IO_FAILURE,
  LFS_MALFORMED_HEADER,
  LFS_UNSUPPORTED_ENCODING,
  LFS_INVALID_RATE,
  LFS_SILENT_SIGNAL,
  LFS_RATE_MISMATCH,
  LFS_OVERLAP_TOO_LONG,
  LFS_EMPTY_IMPULSE,
  LFS_ALL_SILENT,
  LFS_NO_ACTIVITY,
  LFS_TOO_SHORT,
  LFS_CODEC_PROCESS_FAILED,
  LFS_OUTPUT_MISSING,
  LFS_TIMEOUT,
  LFS_SILENT_INPUT,
  LFS_SILENT_NOISE,
  LFS_INSUFFICIENT_POOL,
  LFS_INVALID_COUNTS,
  LFS_MISSING_SEGMENT,
  LFS_SCHEMA_MISMATCH,
  LFS_MALFORMED_LINE,
  LFS_UNKNOWN_UTTERANCE,
  LFS_EMPTY_FILE,
  LFS_ONE_CLASS_ONLY,
  LFS_MISSING_RATIO,
  LFS_EMPTY_INPUT,
  LFS_EMPTY_LIST,
  LFS_UNKNOWN_PARTITION,
  LFS_CONFIG_ERROR,
  LFS_MISSING_SCORES,
  LFS_INTERNAL = 255
} lfs_status;

typedef enum lfs_g711_law { LFS_G711_ALAW = 0, LFS_G711_ULAW = 1 } lfs_g711_law;

typedef struct lfs_waveform lfs_waveform;
typedef struct lfs_config lfs_config;

LFS_API const char* lfs_version(void);
LFS_API const char* lfs_status_string(lfs_status status);
/* Message of the last failure on this thread; empty if none. */
LFS_API const char* lfs_last_error(void);
LFS_API void lfs_string_free(char* s);

/* Waveforms */
LFS_API lfs_status lfs_waveform_create(const double* samples, size_t n, int sample_rate,
                                       lfs_waveform** out);
LFS_API lfs_status lfs_waveform_read(const char* path, lfs_waveform** out);
LFS_API lfs_status lfs_waveform_write(const lfs_waveform* w, const char* path,
                                      size_t* clipped);
LFS_API void lfs_waveform_free(lfs_waveform* w);
LFS_API size_t lfs_waveform_size(const lfs_waveform* w);
LFS_API int lfs_waveform_rate(const lfs_waveform* w);
LFS_API const double* lfs_waveform_data(const lfs_waveform* w);

LFS_API lfs_status lfs_resample(const lfs_waveform* w, int target_rate, lfs_waveform** out);
LFS_API lfs_status lfs_trim_silence(const lfs_waveform* w, double threshold_db,
                                    double window_ms, double pad_ms, lfs_waveform** out);
LFS_API lfs_status lfs_active_speech_level(const lfs_waveform* w, double* level_db);
LFS_API lfs_status lfs_rms_level(const lfs_waveform* w, double* level_db);
LFS_API lfs_status lfs_g711_compand(const lfs_waveform* w, lfs_g711_law law,
                                    lfs_waveform** out);
LFS_API lfs_status lfs_add_noise(const lfs_waveform* w, const lfs_waveform* noise,
                                 double snr_db, uint64_t seed, lfs_waveform** out);
LFS_API lfs_status lfs_apply_rir(const lfs_waveform* w, const lfs_waveform* rir,
                                 lfs_waveform** out);
LFS_API lfs_status lfs_overlap_add(const lfs_waveform* a, const lfs_waveform* b,
                                   double overlap_s, lfs_waveform** out, size_t* clipped);

/* Evaluation */
LFS_API lfs_status lfs_compute_eer(const double* genuine, size_t n_genuine,
                                   const double* spoof, size_t n_spoof, double* eer,
                                   double* threshold);
/* Writes up to `cap` (begin, end) pairs into bounds; *n_chunks receives the
 * total count even when cap is too small. */
LFS_API lfs_status lfs_chunk_bounds(size_t length, int sample_rate, double chunk_s,
                                    size_t* bounds, size_t cap, size_t* n_chunks);

/* Pipeline configuration */
LFS_API lfs_status lfs_config_new(lfs_config** out);
LFS_API lfs_status lfs_config_load(const char* path, lfs_config** out);
LFS_API void lfs_config_free(lfs_config* cfg);
LFS_API lfs_status lfs_config_set_seed(lfs_config* cfg, uint64_t seed);
LFS_API lfs_status lfs_config_set_pool_dir(lfs_config* cfg, const char* dir);
LFS_API lfs_status lfs_config_set_output_dir(lfs_config* cfg, const char* dir);
LFS_API lfs_status lfs_config_set_workers(lfs_config* cfg, unsigned workers);
LFS_API lfs_status lfs_config_set_codec_registry(lfs_config* cfg, const char* path);
LFS_API lfs_status lfs_config_set_scale(lfs_config* cfg, size_t divisor);
LFS_API lfs_status lfs_config_set_verbose(lfs_config* cfg, int verbose);
/* Effective configuration as JSON. */
LFS_API lfs_status lfs_config_to_json(const lfs_config* cfg, char** json);
/* Newline-separated names of the effective partitions. */
LFS_API lfs_status lfs_partition_names(const lfs_config* cfg, char** names);

/* Pipeline stages. Each `summary` out-parameter (optional) receives JSON. */
LFS_API lfs_status lfs_run_standardize(const lfs_config* cfg, const char* src_dir,
                                       const char* protocol, const char* out_dir,
                                       char** summary);
LFS_API lfs_status lfs_run_generate(const lfs_config* cfg, const char* partition,
                                    char** summary);
LFS_API lfs_status lfs_run_chunk(const char* partition_dir, double chunk_s, unsigned workers,
                                 char** summary);

typedef struct lfs_evaluate_options {
  const char* scores;
  const char* manifest;
  const char* report;
  int lower_is_genuine;
  const char* chunk_map; /* NULL: scores are per utterance */
  int allow_partial;
  const char* condition; /* NULL: partition name */
} lfs_evaluate_options;

LFS_API lfs_status lfs_run_evaluate(const lfs_evaluate_options* opts, char** summary);
LFS_API lfs_status lfs_inspect(const char* manifest, char** json);

#ifdef __cplusplus
}
#endif

#endif /* LFSYNTH_LFSYNTH_H_ */
