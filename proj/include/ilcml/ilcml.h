/*
 * Copyright 2026 The ilcml Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the ilcml library. All structured inputs and outputs are
 * UTF-8 JSON strings. Functions return ILCML_OK or an error code; the
 * message of the last failure on the calling thread is available from
 * ilcml_last_error(). Strings returned through char** are owned by the
 * caller and released with ilcml_string_free(). */

#ifndef ILCML_ILCML_H_
#define ILCML_ILCML_H_

#include <stddef.h>

#if defined(ILCML_BUILDING_LIBRARY)
#define ILCML_API __attribute__((visibility("default")))
#else
#define ILCML_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
  ILCML_OK = 0,
  ILCML_INVALID_ARGUMENT = 1,
  ILCML_IO = 2,
  ILCML_PARSE = 3,
  ILCML_NOT_FOUND = 4,
  ILCML_CONFLICT = 5,
  ILCML_FAILED_PRECONDITION = 6,
  ILCML_INTERNAL = 7
};

typedef struct ilcml_dataset ilcml_dataset;
typedef struct ilcml_session ilcml_session;
typedef struct ilcml_service ilcml_service;

ILCML_API const char* ilcml_version(void);
ILCML_API const char* ilcml_last_error(void);
ILCML_API int ilcml_last_error_code(void);
ILCML_API void ilcml_string_free(char* s);

/* Datasets. `name` is "wbc" or "pbc"; schema_json may be NULL for the
 * default comma-separated layout with the label last. */
ILCML_API int ilcml_dataset_load_named(const char* name, const char* data_dir,
                                       ilcml_dataset** out);
ILCML_API int ilcml_dataset_load_csv(const char* path, const char* schema_json,
                                     ilcml_dataset** out);
ILCML_API int ilcml_dataset_from_json(const char* json, ilcml_dataset** out);
/* "raw" or "min_max_unit"; replaces the handle's contents. */
ILCML_API int ilcml_dataset_normalize(ilcml_dataset* d, const char* mode);
ILCML_API int ilcml_dataset_to_json(const ilcml_dataset* d, char** out);
ILCML_API int ilcml_dataset_summary(const ilcml_dataset* d, char** out);
ILCML_API size_t ilcml_dataset_size(const ilcml_dataset* d);
ILCML_API void ilcml_dataset_free(ilcml_dataset* d);

/* Polylines of every case under a projection request. */
ILCML_API int ilcml_project(const ilcml_dataset* d, const char* projection_json,
                            char** out);

/* Model training and scoring. A model is an ilcml.model/1 document; a bare
 * rule file is accepted wherever a model is. */
ILCML_API int ilcml_fit(const ilcml_dataset* d, const char* pipeline_json,
                        char** model_out);
/* split: "training", "validation" or "testing" (NULL). */
ILCML_API int ilcml_evaluate(const ilcml_dataset* d, const char* model_json,
                             const char* split, char** report_out);
ILCML_API int ilcml_predict(const char* model_json, const double* values,
                            size_t count, int* predicted);
ILCML_API int ilcml_cross_validate(const ilcml_dataset* d,
                                   const char* pipeline_json,
                                   const char* plan_json, char** report_out);
ILCML_API int ilcml_baseline_tree(const ilcml_dataset* d, const char* plan_json,
                                  const char* tree_json, char** report_out);

/* Rule files; a BC model is accepted in place of one. mode is "refuse" or
 * "associate". */
ILCML_API int ilcml_prune(const ilcml_dataset* d, const char* rules_json,
                          size_t min_cases, const char* mode, char** out);
ILCML_API int ilcml_join(const ilcml_dataset* d, const char* rules_json,
                         char** out);
ILCML_API int ilcml_render_rules(const char* rules_json, char** out);

/* Local explanation of request.point with the rule file as predictor. */
ILCML_API int ilcml_explain(const ilcml_dataset* train, const char* rules_json,
                            const char* request_json, char** out);

/* Named reproduction target; *passed is 1 when every check passes. */
ILCML_API int ilcml_reproduce(const char* target, const char* data_dir,
                              char** report_out, int* passed);

/* Interactive sessions driven directly or rebuilt from an action log. */
ILCML_API int ilcml_session_create(const ilcml_dataset* d,
                                   const char* projection_json,
                                   const char* grid_json, ilcml_session** out);
ILCML_API int ilcml_session_replay(const char* log_text, ilcml_session** out);
ILCML_API int ilcml_session_candidates(ilcml_session* s, size_t top_k,
                                       char** out);
/* box_json: {"rect": [x1, x2, y1, y2], "membership": ..., "class": ...}. */
ILCML_API int ilcml_session_accept(ilcml_session* s, const char* box_json);
ILCML_API int ilcml_session_undo(ilcml_session* s);
ILCML_API int ilcml_session_prune(ilcml_session* s, size_t min_cases,
                                  const char* mode);
ILCML_API int ilcml_session_join(ilcml_session* s);
ILCML_API int ilcml_session_rules(const ilcml_session* s, char** out);
ILCML_API int ilcml_session_log(const ilcml_session* s, char** out);
ILCML_API int ilcml_session_digest(const ilcml_session* s, char** out);
ILCML_API void ilcml_session_free(ilcml_session* s);

/* HTTP service. options_json: {"data_dir", "log_dir", "token"}. */
ILCML_API int ilcml_service_create(const char* options_json,
                                   ilcml_service** out);
/* query_json is an object of string values or NULL. */
ILCML_API int ilcml_service_handle(ilcml_service* s, const char* method,
                                   const char* path, const char* query_json,
                                   const char* body, int* status,
                                   char** response);
/* Blocks; host NULL and port 0 read ILCML_BIND. */
ILCML_API int ilcml_service_serve(ilcml_service* s, const char* host, int port);
ILCML_API void ilcml_service_stop(ilcml_service* s);
ILCML_API void ilcml_service_free(ilcml_service* s);

#ifdef __cplusplus
}
#endif

#endif /* ILCML_ILCML_H_ */
