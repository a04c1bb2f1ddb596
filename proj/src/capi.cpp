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

#include "qwalk/qwalk.h"

#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "qwalk/analysis.hpp"
#include "qwalk/error.hpp"
#include "qwalk/experiment.hpp"

struct qw_substrate {
  qwalk::Substrate value;
};
struct qw_coin {
  qwalk::CoinOperator value;
};
struct qw_walk_state {
  qwalk::WalkState value;
};
struct qw_distribution {
  qwalk::Distribution value;
};
struct qw_config {
  qwalk::ExperimentConfig value;
  std::vector<qwalk::Diagnostic> diagnostics;
  std::vector<std::string> messages;
};

namespace {

thread_local std::string last_error;

qw_status status_of(qwalk::ErrorKind kind) {
  using qwalk::ErrorKind;
  switch (kind) {
    case ErrorKind::Validation: return QW_ERR_VALIDATION;
    case ErrorKind::Resource: return QW_ERR_RESOURCE;
    case ErrorKind::NumericalFailure: return QW_ERR_NUMERICAL;
    case ErrorKind::Io: return QW_ERR_IO;
    case ErrorKind::OutOfRange: return QW_ERR_OUT_OF_RANGE;
    case ErrorKind::InvalidDimension:
    case ErrorKind::Dimension: return QW_ERR_DIMENSION;
    default: return QW_ERR_INVALID_ARGUMENT;
  }
}

qw_status fail(qw_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

// Runs f, translating exceptions into status codes.
template <class F>
qw_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return QW_OK;
  } catch (const qwalk::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(QW_ERR_RESOURCE, "out of memory");
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(QW_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(QW_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QW_ERR_INTERNAL, "unknown error");
  }
}

#define QW_REQUIRE(cond)                                                      \
  do {                                                                        \
    if (!(cond)) return fail(QW_ERR_INVALID_ARGUMENT, "null argument: " #cond); \
  } while (0)

qwalk::Boundary boundary(int periodic) { return periodic ? qwalk::Boundary::Periodic : qwalk::Boundary::Open; }

template <class Handle, class Value>
qw_status emit(Handle** out, Value&& v) {
  *out = new Handle{std::forward<Value>(v)};
  return QW_OK;
}

qw_config* make_config(qwalk::LoadedConfig lc) {
  auto* c = new qw_config{std::move(lc.config), std::move(lc.diagnostics), {}};
  for (const auto& d : c->diagnostics) c->messages.push_back(d.to_string());
  return c;
}

}  // namespace

extern "C" {

const char* qw_version(void) { return QWALK_VERSION; }

const char* qw_status_string(qw_status status) {
  switch (status) {
    case QW_OK: return "ok";
    case QW_ERR_VALIDATION: return "validation error";
    case QW_ERR_RESOURCE: return "resource limit exceeded";
    case QW_ERR_NUMERICAL: return "numerical failure";
    case QW_ERR_IO: return "i/o error";
    case QW_ERR_INVALID_ARGUMENT: return "invalid argument";
    case QW_ERR_OUT_OF_RANGE: return "out of range";
    case QW_ERR_DIMENSION: return "dimension mismatch";
    case QW_ERR_INTERNAL: return "internal error";
    case QW_ERR_BUFFER_TOO_SMALL: return "buffer too small";
  }
  return "unknown status";
}

const char* qw_last_error(void) { return last_error.c_str(); }

// ---- substrates ----

qw_status qw_substrate_line(size_t n_sites, int periodic, qw_substrate** out) {
  QW_REQUIRE(out);
  return guarded([&] { emit(out, qwalk::Substrate::line(n_sites, boundary(periodic))); });
}

qw_status qw_substrate_lattice(const size_t* dims, size_t n_dims, int periodic, qw_substrate** out) {
  QW_REQUIRE(out && (dims || n_dims == 0));
  return guarded([&] {
    emit(out, qwalk::Substrate::lattice(std::span<const std::size_t>(dims, n_dims), boundary(periodic)));
  });
}

qw_status qw_substrate_from_edges(const size_t* pairs, size_t n_edges, size_t n_vertices, qw_substrate** out) {
  QW_REQUIRE(out && (pairs || n_edges == 0));
  return guarded([&] {
    std::vector<qwalk::Edge> edges(n_edges);
    for (size_t i = 0; i < n_edges; ++i) edges[i] = {pairs[2 * i], pairs[2 * i + 1]};
    emit(out, qwalk::Substrate::from_adjacency(edges, n_vertices));
  });
}

qw_status qw_substrate_load(const char* path, qw_substrate** out) {
  QW_REQUIRE(path && out);
  return guarded([&] { emit(out, qwalk::read_adjacency(std::filesystem::path(path))); });
}

qw_status qw_substrate_save(const qw_substrate* s, const char* path) {
  QW_REQUIRE(s && path);
  return guarded([&] { qwalk::write_adjacency(std::filesystem::path(path), s->value); });
}

qw_status qw_substrate_percolate(const qw_substrate* s, int mode, double p, uint64_t seed, qw_substrate** out) {
  QW_REQUIRE(s && out);
  if (mode != 0 && mode != 1) return fail(QW_ERR_INVALID_ARGUMENT, "percolation mode must be 0 (bond) or 1 (site)");
  return guarded([&] {
    const qwalk::PercolationSpec spec{mode == 0 ? qwalk::PercolationMode::Bond : qwalk::PercolationMode::Site, p, seed};
    emit(out, qwalk::percolate(s->value, spec));
  });
}

size_t qw_substrate_vertices(const qw_substrate* s) { return s ? s->value.n_vertices() : 0; }
size_t qw_substrate_edges(const qw_substrate* s) { return s ? s->value.n_edges() : 0; }
size_t qw_substrate_coin_slots(const qw_substrate* s) { return s ? s->value.coin_slots() : 0; }
uint64_t qw_substrate_fingerprint(const qw_substrate* s) { return s ? s->value.fingerprint() : 0; }
void qw_substrate_free(qw_substrate* s) { delete s; }

// ---- coins ----

qw_status qw_coin_hadamard(qw_coin** out) {
  QW_REQUIRE(out);
  return guarded([&] { emit(out, qwalk::hadamard_coin()); });
}

qw_status qw_coin_grover(size_t dimension, qw_coin** out) {
  QW_REQUIRE(out);
  return guarded([&] { emit(out, qwalk::grover_coin(dimension)); });
}

qw_status qw_coin_dft(size_t dimension, qw_coin** out) {
  QW_REQUIRE(out);
  return guarded([&] { emit(out, qwalk::dft_coin(dimension)); });
}

qw_status qw_coin_custom(size_t dimension, const double* matrix, double tolerance, qw_coin** out) {
  QW_REQUIRE(out && matrix);
  return guarded([&] {
    std::vector<qwalk::Complex> m(dimension * dimension);
    for (size_t i = 0; i < m.size(); ++i) m[i] = {matrix[2 * i], matrix[2 * i + 1]};
    emit(out, qwalk::CoinOperator(dimension, std::move(m), tolerance));
  });
}

size_t qw_coin_dimension(const qw_coin* c) { return c ? c->value.dimension() : 0; }
void qw_coin_free(qw_coin* c) { delete c; }

// ---- coined walks ----

qw_status qw_walk_initial(const qw_substrate* s, double b, double beta, size_t start_vertex, qw_walk_state** out) {
  QW_REQUIRE(s && out);
  return guarded([&] { emit(out, qwalk::initial_state({b, beta, start_vertex}, s->value)); });
}

qw_status qw_walk_evolve(qw_walk_state* state, const qw_coin* coin, const qw_substrate* s, uint64_t steps) {
  QW_REQUIRE(state && coin && s);
  return guarded([&] { state->value = qwalk::evolve(state->value, coin->value, s->value, steps); });
}

uint64_t qw_walk_step_count(const qw_walk_state* state) { return state ? state->value.step_count : 0; }
size_t qw_walk_size(const qw_walk_state* state) { return state ? state->value.amplitudes.size() : 0; }

qw_status qw_walk_amplitudes(const qw_walk_state* state, double* out, size_t capacity, size_t* needed) {
  QW_REQUIRE(state);
  const auto& a = state->value.amplitudes;
  if (needed) *needed = a.size();
  if (capacity < a.size() || !out) return fail(QW_ERR_BUFFER_TOO_SMALL, "amplitude buffer too small");
  for (size_t i = 0; i < a.size(); ++i) {
    out[2 * i] = a[i].real();
    out[2 * i + 1] = a[i].imag();
  }
  return QW_OK;
}

qw_status qw_walk_distribution(const qw_walk_state* state, const qw_substrate* s, size_t origin_vertex,
                               qw_distribution** out) {
  QW_REQUIRE(state && s && out);
  return guarded([&] { emit(out, qwalk::position_distribution(state->value, s->value, origin_vertex)); });
}

void qw_walk_free(qw_walk_state* state) { delete state; }

qw_status qw_continuous_distribution(const qw_substrate* s, double gamma, size_t start_vertex, double t,
                                     qw_distribution** out, double* leakage) {
  QW_REQUIRE(s && out);
  return guarded([&] {
    const auto h = qwalk::build_hamiltonian(s->value, gamma);
    const auto psi = qwalk::evolve_ct(qwalk::vertex_state(s->value, start_vertex), h, t);
    if (leakage) *leakage = qwalk::boundary_probability(psi, s->value);
    emit(out, qwalk::position_distribution(psi, s->value, start_vertex));
  });
}

// ---- distributions ----

size_t qw_distribution_size(const qw_distribution* d) { return d ? d->value.size() : 0; }

qw_status qw_distribution_probabilities(const qw_distribution* d, double* out, size_t capacity) {
  QW_REQUIRE(d && out);
  if (capacity < d->value.size()) return fail(QW_ERR_BUFFER_TOO_SMALL, "probability buffer too small");
  std::memcpy(out, d->value.probabilities.data(), d->value.size() * sizeof(double));
  return QW_OK;
}

qw_status qw_distribution_label(const qw_distribution* d, size_t index, int64_t* out, size_t capacity,
                                size_t* needed) {
  QW_REQUIRE(d);
  if (index >= d->value.size()) return fail(QW_ERR_OUT_OF_RANGE, "label index out of range");
  const auto& label = d->value.labels[index];
  if (needed) *needed = label.size();
  if (capacity < label.size() || !out) return fail(QW_ERR_BUFFER_TOO_SMALL, "label buffer too small");
  std::copy(label.begin(), label.end(), out);
  return QW_OK;
}

qw_status qw_distribution_moments(const qw_distribution* d, double* variance, double* sigma) {
  QW_REQUIRE(d);
  return guarded([&] {
    const auto m = qwalk::moments(d->value);
    if (variance) *variance = m.variance;
    if (sigma) *sigma = m.sigma;
  });
}

double qw_distribution_ipr(const qw_distribution* d) { return d ? qwalk::ipr(d->value) : 0.0; }

qw_status qw_distribution_tv(const qw_distribution* a, const qw_distribution* b, double* out) {
  QW_REQUIRE(a && b && out);
  return guarded([&] { *out = qwalk::total_variation(a->value, b->value); });
}

qw_status qw_distribution_sample(const qw_distribution* d, size_t n, uint64_t seed, size_t* outcomes) {
  QW_REQUIRE(d && (outcomes || n == 0));
  return guarded([&] {
    const auto s = qwalk::sample(d->value, n, seed);
    std::copy(s.outcomes.begin(), s.outcomes.end(), outcomes);
  });
}

qw_status qw_distribution_save_csv(const qw_distribution* d, const char* path) {
  QW_REQUIRE(d && path);
  return guarded([&] { qwalk::write_distribution_csv(std::filesystem::path(path), d->value); });
}

qw_status qw_classical_binomial(uint64_t steps, qw_distribution** out) {
  QW_REQUIRE(out);
  return guarded([&] { emit(out, qwalk::classical_binomial(steps)); });
}

void qw_distribution_free(qw_distribution* d) { delete d; }

// ---- resources ----

uint64_t qw_qubits_needed(uint64_t steps) {
  try {
    return qwalk::qubits_needed(steps);
  } catch (const std::exception& e) {
    last_error = e.what();
    return 0;
  }
}

uint64_t qw_amplitude_capacity(uint64_t memory_bytes, uint64_t bytes_per_float) {
  try {
    return qwalk::amplitude_capacity(memory_bytes, bytes_per_float);
  } catch (const std::exception& e) {
    last_error = e.what();
    return 0;
  }
}

uint64_t qw_density_capacity(uint64_t memory_bytes, uint64_t bytes_per_float) {
  try {
    return qwalk::density_capacity(memory_bytes, bytes_per_float);
  } catch (const std::exception& e) {
    last_error = e.what();
    return 0;
  }
}

qw_status qw_dimension_guard(uint64_t sites, uint64_t walkers, uint64_t coin_dim, uint64_t budget, int continuous) {
  return guarded([&] {
    qwalk::dimension_guard(sites, walkers, coin_dim, budget,
                           continuous ? qwalk::WalkKind::Continuous : qwalk::WalkKind::DiscreteCoined);
  });
}

// ---- configs ----

qw_status qw_config_load(const char* path, qw_config** out) {
  QW_REQUIRE(path && out);
  *out = nullptr;
  return guarded([&] {
    const std::filesystem::path p(path);
    if (!std::filesystem::is_regular_file(p)) throw qwalk::Error(qwalk::ErrorKind::Io, "cannot open config " + p.string());
    *out = make_config(qwalk::load_config(p));
  });
}

qw_status qw_config_parse(const char* text, qw_config** out) {
  QW_REQUIRE(text && out);
  *out = nullptr;
  return guarded([&] {
    std::istringstream in(text);
    *out = make_config(qwalk::load_config(in));
  });
}

void qw_config_set_seed(qw_config* c, uint64_t seed) {
  if (c) c->value.seed = seed;
}

size_t qw_config_diagnostic_count(const qw_config* c) { return c ? c->diagnostics.size() : 0; }

const char* qw_config_diagnostic(const qw_config* c, size_t index) {
  if (!c || index >= c->messages.size()) return nullptr;
  return c->messages[index].c_str();
}

int qw_config_diagnostic_is_resource(const qw_config* c, size_t index) {
  if (!c || index >= c->diagnostics.size()) return 0;
  return c->diagnostics[index].kind == qwalk::Diagnostic::Kind::Resource;
}

qw_status qw_config_validate(const qw_config* c) {
  QW_REQUIRE(c);
  if (c->diagnostics.empty()) return QW_OK;
  std::string msg;
  bool resource_only = true;
  for (size_t i = 0; i < c->messages.size(); ++i) {
    msg += (i ? "; " : "") + c->messages[i];
    resource_only = resource_only && c->diagnostics[i].kind == qwalk::Diagnostic::Kind::Resource;
  }
  return fail(resource_only ? QW_ERR_RESOURCE : QW_ERR_VALIDATION, msg);
}

qw_status qw_run(const qw_config* c, const char* out_dir, size_t threads) {
  QW_REQUIRE(c && out_dir);
  if (qw_status s = qw_config_validate(c); s != QW_OK) return s;
  return guarded([&] { qwalk::run(c->value, std::filesystem::path(out_dir), {threads == 0 ? 1 : threads}); });
}

qw_status qw_estimate(const qw_config* c, uint64_t memory_bytes, char* buf, size_t capacity, size_t* needed) {
  QW_REQUIRE(c);
  std::string text;
  if (qw_status s = guarded([&] { text = qwalk::estimate(c->value, memory_bytes); }); s != QW_OK) return s;
  if (needed) *needed = text.size() + 1;
  if (!buf || capacity < text.size() + 1) return fail(QW_ERR_BUFFER_TOO_SMALL, "estimate buffer too small");
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return QW_OK;
}

void qw_config_free(qw_config* c) { delete c; }

}  // extern "C"
