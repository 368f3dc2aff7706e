/*
 * Copyright 2026 The stsynth Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of the self-triggered controller synthesizer.
 *
 * All objects are opaque handles released with the matching *_free call.
 * Functions return a stsynth_status; on failure stsynth_last_error() gives
 * the message for the calling thread.
 */
#ifndef STSYNTH_STSYNTH_H
#define STSYNTH_STSYNTH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define STSYNTH_API __declspec(dllexport)
#else
#define STSYNTH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum stsynth_status {
    STSYNTH_OK = 0,
    STSYNTH_UNREALIZABLE = 2,
    STSYNTH_CONFIG = 3,
    STSYNTH_INVARIANT = 4,
    STSYNTH_UNCONTROLLABLE = 5,
    STSYNTH_OVERFLOW = 6,
    STSYNTH_IO = 7
} stsynth_status;

typedef struct stsynth_config stsynth_config;
typedef struct stsynth_model stsynth_model;
typedef struct stsynth_annotation stsynth_annotation;
typedef struct stsynth_game stsynth_game;
typedef struct stsynth_solution stsynth_solution;
typedef struct stsynth_result stsynth_result;
typedef struct stsynth_controller stsynth_controller;
typedef struct stsynth_run stsynth_run;

/* Receives text produced by a call (reports, progress lines). */
typedef void (*stsynth_text_fn)(const char* text, void* user);

STSYNTH_API const char* stsynth_version(void);
STSYNTH_API const char* stsynth_last_error(void);

/* configuration */
STSYNTH_API int stsynth_config_load(const char* path, stsynth_config** out);
STSYNTH_API int stsynth_config_parse(const char* text, stsynth_config** out);
STSYNTH_API int stsynth_config_robot_example(stsynth_config** out);
/* keys: paper_beta (true|false), pitch_mode (half|paper), jobs, seed, steps, runs, grace */
STSYNTH_API int stsynth_config_set(stsynth_config* cfg, const char* key, const char* value);
/* Strings stay valid until the next call on the same handle. */
STSYNTH_API const char* stsynth_config_canonical(stsynth_config* cfg);
STSYNTH_API const char* stsynth_config_hash(stsynth_config* cfg);
STSYNTH_API void stsynth_config_free(stsynth_config* cfg);

/* abstraction */
STSYNTH_API int stsynth_abstract(const stsynth_config* cfg, stsynth_model** out);
STSYNTH_API int stsynth_model_load(const char* path, stsynth_model** out);
STSYNTH_API int stsynth_model_save(const stsynth_model* m, const char* path);
STSYNTH_API int stsynth_model_info(const stsynth_model* m, size_t* states, size_t* signals, size_t* transitions);
STSYNTH_API void stsynth_model_free(stsynth_model* m);

/* specification */
STSYNTH_API int stsynth_compile(const stsynth_config* cfg, stsynth_annotation** out);
STSYNTH_API int stsynth_annotation_load(const char* path, stsynth_annotation** out);
STSYNTH_API int stsynth_annotation_save(const stsynth_annotation* a, const char* path);
STSYNTH_API int stsynth_annotation_info(const stsynth_annotation* a, size_t* copies, int* max_color);
STSYNTH_API void stsynth_annotation_free(stsynth_annotation* a);

/* game */
STSYNTH_API int stsynth_translate(const stsynth_config* cfg, const stsynth_model* m, const stsynth_annotation* a,
                                  stsynth_game** out);
STSYNTH_API int stsynth_game_load(const char* path, stsynth_game** out);
STSYNTH_API int stsynth_game_save(const stsynth_game* g, const char* path);
STSYNTH_API int stsynth_game_info(const stsynth_game* g, size_t* vertices, size_t* edges);
STSYNTH_API void stsynth_game_free(stsynth_game* g);

/* threshold game solving */
STSYNTH_API int stsynth_solve(const stsynth_game* g, stsynth_solution** out);
STSYNTH_API int stsynth_solution_winning(const stsynth_solution* s, uint8_t* win, size_t n);
STSYNTH_API int stsynth_solution_info(const stsynth_solution* s, size_t* winning, int* positional, int* complete);
STSYNTH_API int stsynth_solution_save_strategy(const stsynth_solution* s, const char* path);
STSYNTH_API int stsynth_solution_save_winning(const stsynth_solution* s, const char* path);
STSYNTH_API void stsynth_solution_free(stsynth_solution* s);

/* refinement loop; returns STSYNTH_OK when a controller was found, STSYNTH_UNREALIZABLE otherwise */
STSYNTH_API int stsynth_synthesize(const stsynth_config* cfg, stsynth_text_fn progress, void* user, stsynth_result** out);
STSYNTH_API int stsynth_result_report(const stsynth_result* r, stsynth_text_fn sink, void* user);
STSYNTH_API int stsynth_result_iterations(const stsynth_result* r, size_t* count);
STSYNTH_API int stsynth_result_controller(const stsynth_result* r, stsynth_controller** out);
STSYNTH_API void stsynth_result_free(stsynth_result* r);

/* controller */
STSYNTH_API int stsynth_controller_load(const char* path, stsynth_controller** out);
STSYNTH_API int stsynth_controller_save(const stsynth_controller* c, const char* path);
STSYNTH_API int stsynth_controller_info(const stsynth_controller* c, size_t* memory, size_t* entries);
STSYNTH_API void stsynth_controller_free(stsynth_controller* c);

/* closed loop; a run that reaches an uncontrollable state is still returned with STSYNTH_UNCONTROLLABLE */
STSYNTH_API int stsynth_simulate(const stsynth_config* cfg, const stsynth_controller* c, uint64_t seed, int64_t steps,
                                 stsynth_run** out);
STSYNTH_API int stsynth_run_load(const char* path, stsynth_run** out);
STSYNTH_API int stsynth_run_save(const stsynth_run* r, const char* path);
STSYNTH_API int stsynth_run_save_csv(const stsynth_run* r, const char* path);
STSYNTH_API int stsynth_run_info(const stsynth_run* r, size_t* steps, size_t* bound_violations, int* failed);
STSYNTH_API void stsynth_run_free(stsynth_run* r);

typedef struct stsynth_verdict {
    int pass;
    int64_t grace, burn_in, horizon, max_gap;
    double average_length, tail_average_length, trigger_rate;
    size_t bound_violations;
} stsynth_verdict;

/* Bounded-horizon check of the configured formula; detail (may be NULL) receives the explanation. */
STSYNTH_API int stsynth_check(const stsynth_config* cfg, const stsynth_run* r, stsynth_verdict* out,
                              stsynth_text_fn detail, void* user);

/* Random solver instances against the brute-force oracles; STSYNTH_INVARIANT on any disagreement. */
STSYNTH_API int stsynth_selftest(uint64_t seed, int instances, stsynth_text_fn sink, void* user);

#ifdef __cplusplus
}
#endif

#endif
