// Copyright 2026 The qwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the qwalk simulator.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every fallible call returns a qw_status; on failure qw_last_error() gives
 * a message for the calling thread. Complex arrays are interleaved (re, im).
 */
#ifndef QWALK_QWALK_H
#define QWALK_QWALK_H

#include <stddef.h>
#include <stdint.h>

#if defined(QWALK_BUILDING_LIBRARY)
#define QW_API __attribute__((visibility("default")))
#else
#define QW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qw_status {
  QW_OK = 0,
  QW_ERR_VALIDATION = 1,
  QW_ERR_RESOURCE = 2,
  QW_ERR_NUMERICAL = 3,
  QW_ERR_IO = 4,
  QW_ERR_INVALID_ARGUMENT = 5,
  QW_ERR_OUT_OF_RANGE = 6,
  QW_ERR_DIMENSION = 7,
  QW_ERR_INTERNAL = 8,
  QW_ERR_BUFFER_TOO_SMALL = 9
} qw_status;

typedef struct qw_substrate qw_substrate;
typedef struct qw_coin qw_coin;
typedef struct qw_walk_state qw_walk_state;
typedef struct qw_distribution qw_distribution;
typedef struct qw_config qw_config;

QW_API const char* qw_version(void);
QW_API const char* qw_status_string(qw_status status);
/* Message of the last failed call on this thread, "" if none. */
QW_API const char* qw_last_error(void);

/* Substrates. periodic: 0 open, 1 periodic. */
QW_API qw_status qw_substrate_line(size_t n_sites, int periodic, qw_substrate** out);
QW_API qw_status qw_substrate_lattice(const size_t* dims, size_t n_dims, int periodic, qw_substrate** out);
/* pairs holds 2*n_edges vertex indices. */
QW_API qw_status qw_substrate_from_edges(const size_t* pairs, size_t n_edges, size_t n_vertices, qw_substrate** out);
QW_API qw_status qw_substrate_load(const char* path, qw_substrate** out);
QW_API qw_status qw_substrate_save(const qw_substrate* s, const char* path);
/* mode: 0 bond, 1 site. */
QW_API qw_status qw_substrate_percolate(const qw_substrate* s, int mode, double p, uint64_t seed, qw_substrate** out);
QW_API size_t qw_substrate_vertices(const qw_substrate* s);
QW_API size_t qw_substrate_edges(const qw_substrate* s);
QW_API size_t qw_substrate_coin_slots(const qw_substrate* s);
QW_API uint64_t qw_substrate_fingerprint(const qw_substrate* s);
QW_API void qw_substrate_free(qw_substrate* s);

/* Coins. */
QW_API qw_status qw_coin_hadamard(qw_coin** out);
QW_API qw_status qw_coin_grover(size_t dimension, qw_coin** out);
QW_API qw_status qw_coin_dft(size_t dimension, qw_coin** out);
/* matrix: dimension*dimension complex entries, row major. */
QW_API qw_status qw_coin_custom(size_t dimension, const double* matrix, double tolerance, qw_coin** out);
QW_API size_t qw_coin_dimension(const qw_coin* c);
QW_API void qw_coin_free(qw_coin* c);

/* Coined walk states. */
QW_API qw_status qw_walk_initial(const qw_substrate* s, double b, double beta, size_t start_vertex,
                                 qw_walk_state** out);
QW_API qw_status qw_walk_evolve(qw_walk_state* state, const qw_coin* coin, const qw_substrate* s, uint64_t steps);
QW_API uint64_t qw_walk_step_count(const qw_walk_state* state);
QW_API size_t qw_walk_size(const qw_walk_state* state);
/* Copies qw_walk_size() complex amplitudes; *needed receives the count. */
QW_API qw_status qw_walk_amplitudes(const qw_walk_state* state, double* out, size_t capacity, size_t* needed);
QW_API qw_status qw_walk_distribution(const qw_walk_state* state, const qw_substrate* s, size_t origin_vertex,
                                      qw_distribution** out);
QW_API void qw_walk_free(qw_walk_state* state);

/* Continuous walk from a single vertex; leakage may be NULL. */
QW_API qw_status qw_continuous_distribution(const qw_substrate* s, double gamma, size_t start_vertex, double t,
                                            qw_distribution** out, double* leakage);

/* Distributions. */
QW_API size_t qw_distribution_size(const qw_distribution* d);
QW_API qw_status qw_distribution_probabilities(const qw_distribution* d, double* out, size_t capacity);
QW_API qw_status qw_distribution_label(const qw_distribution* d, size_t index, int64_t* out, size_t capacity,
                                       size_t* needed);
QW_API qw_status qw_distribution_moments(const qw_distribution* d, double* variance, double* sigma);
QW_API double qw_distribution_ipr(const qw_distribution* d);
QW_API qw_status qw_distribution_tv(const qw_distribution* a, const qw_distribution* b, double* out);
QW_API qw_status qw_distribution_sample(const qw_distribution* d, size_t n, uint64_t seed, size_t* outcomes);
QW_API qw_status qw_distribution_save_csv(const qw_distribution* d, const char* path);
QW_API qw_status qw_classical_binomial(uint64_t steps, qw_distribution** out);
QW_API void qw_distribution_free(qw_distribution* d);

/* Resource estimates. continuous: 0 coined, 1 continuous. */
QW_API uint64_t qw_qubits_needed(uint64_t steps);
QW_API uint64_t qw_amplitude_capacity(uint64_t memory_bytes, uint64_t bytes_per_float);
QW_API uint64_t qw_density_capacity(uint64_t memory_bytes, uint64_t bytes_per_float);
QW_API qw_status qw_dimension_guard(uint64_t sites, uint64_t walkers, uint64_t coin_dim, uint64_t budget,
                                    int continuous);

/* Experiment configs. Loading succeeds for well-formed files even when the
 * job is invalid; the problems are listed as diagnostics. */
QW_API qw_status qw_config_load(const char* path, qw_config** out);
QW_API qw_status qw_config_parse(const char* text, qw_config** out);
QW_API void qw_config_set_seed(qw_config* c, uint64_t seed);
QW_API size_t qw_config_diagnostic_count(const qw_config* c);
QW_API const char* qw_config_diagnostic(const qw_config* c, size_t index);
QW_API int qw_config_diagnostic_is_resource(const qw_config* c, size_t index);
/* QW_OK, QW_ERR_VALIDATION or QW_ERR_RESOURCE (only resource problems). */
QW_API qw_status qw_config_validate(const qw_config* c);
QW_API qw_status qw_run(const qw_config* c, const char* out_dir, size_t threads);
/* Writes a NUL-terminated report; *needed includes the terminator. */
QW_API qw_status qw_estimate(const qw_config* c, uint64_t memory_bytes, char* buf, size_t capacity, size_t* needed);
QW_API void qw_config_free(qw_config* c);

#ifdef __cplusplus
}
#endif

#endif /* QWALK_QWALK_H */
