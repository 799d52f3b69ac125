/* Copyright 2026 The SHS Bench Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* Stable C interface of the shs shared library.
 *
 * Every call returns an shs_status. On failure, shs_last_error() describes the
 * most recent failure on the calling thread. Handles are opaque, owned by the
 * caller and released with the matching *_free function; passing NULL to a
 * free function is a no-op. Strings returned through char** are allocated by
 * the library and released with shs_string_free.
 */

#ifndef SHS_SHS_H_
#define SHS_SHS_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SHS_API __declspec(dllexport)
#else
#define SHS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum shs_status {
  SHS_OK = 0,
  SHS_INVALID_ARGUMENT = 1,
  SHS_IO = 2,
  SHS_PARSE = 3,
  SHS_CONFIG = 4,
  SHS_CAPABILITY = 5,
  SHS_TRAINING = 6,
  SHS_NUMERICAL = 7,
  SHS_INFEASIBLE = 8,
  SHS_INTERNAL = 9
} shs_status;

typedef struct shs_dataset shs_dataset;
typedef struct shs_model shs_model;
typedef struct shs_report shs_report;

#define SHS_NUM_FEATURES 15
#define SHS_NUM_STATES 11

SHS_API const char* shs_version(void);
/* Valid until the next failing call on the same thread. Never NULL. */
SHS_API const char* shs_last_error(void);
SHS_API void shs_string_free(char* s);

/* ---- Datasets ---- */

SHS_API shs_status shs_dataset_generate(uint64_t seed, size_t per_class, double noise,
                                        shs_dataset** out);
SHS_API shs_status shs_dataset_load_csv(const char* path, shs_dataset** out);
SHS_API shs_status shs_dataset_save_csv(const shs_dataset* ds, const char* path);
/* Stratified split; both halves are shuffled under the seed. */
SHS_API shs_status shs_dataset_split(const shs_dataset* ds, double train_fraction, uint64_t seed,
                                     shs_dataset** train, shs_dataset** test);
/* First n samples (all of them when n exceeds the size). */
SHS_API shs_status shs_dataset_head(const shs_dataset* ds, size_t n, shs_dataset** out);
SHS_API shs_status shs_dataset_size(const shs_dataset* ds, size_t* out);
/* counts must hold SHS_NUM_STATES entries. */
SHS_API shs_status shs_dataset_class_counts(const shs_dataset* ds, size_t* counts);
SHS_API void shs_dataset_free(shs_dataset* ds);

/* ---- Models ---- */

/* algorithm: "dt", "rf", "lr" or "nn", default hyperparameters. */
SHS_API shs_status shs_model_train(const char* algorithm, const shs_dataset* train, uint64_t seed,
                                   shs_model** out);
SHS_API shs_status shs_model_save(const shs_model* m, const char* path);
SHS_API shs_status shs_model_load(const char* path, shs_model** out);
/* Percentage of correctly classified samples. */
SHS_API shs_status shs_model_accuracy(const shs_model* m, const shs_dataset* ds, double* out);
SHS_API shs_status shs_model_info(const shs_model* m, char** out);
/* x: SHS_NUM_FEATURES physical values; *label receives the state index. */
SHS_API shs_status shs_model_predict(const shs_model* m, const double* x, int* label);
SHS_API void shs_model_free(shs_model* m);

/* ---- Attacks and poisoning ---- */

/* attack: "fgm", "cw", "hsj", "zoo" or "tree". target < 0 runs untargeted;
 * target == SHS_NUM_STATES aims every sample at the next class index.
 * threshold < 0 means unbounded. device_mask bit i allows device i; 0 allows
 * all. Writes the per-sample CSV to *csv and the summary figures to the other
 * outputs, each of which may be NULL. */
SHS_API shs_status shs_attack_batch(const shs_model* m, const shs_dataset* slice,
                                    const char* attack, int target, double threshold,
                                    uint32_t device_mask, size_t query_budget, uint64_t seed,
                                    size_t jobs, char** csv, double* clean_accuracy,
                                    double* accuracy_drop, double* success_rate);

/* mode: "label_flip", "injection" or "modification". */
SHS_API shs_status shs_poison(const shs_dataset* train, const char* mode, double rate,
                              uint64_t seed, shs_dataset** out, char** manifest_csv);

/* ---- Experiments ---- */

/* Materializes every default of a JSON config (may be "{}"). */
SHS_API shs_status shs_config_resolve(const char* config_json, char** out);
/* Runs the recipe. Cell failures do not fail the call; check
 * shs_report_failures. */
SHS_API shs_status shs_run_experiment(const char* config_json, shs_report** out);
SHS_API shs_status shs_report_csv(const shs_report* r, char** out);
SHS_API shs_status shs_report_svg(const shs_report* r, char** out);
SHS_API shs_status shs_report_manifest(const shs_report* r, char** out);
SHS_API shs_status shs_report_failures(const shs_report* r, size_t* out);
SHS_API void shs_report_free(shs_report* r);

#ifdef __cplusplus
}
#endif

#endif /* SHS_SHS_H_ */
