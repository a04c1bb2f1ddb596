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

#include "qwalk/analysis.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "qwalk/error.hpp"
#include "qwalk/rng.hpp"

namespace qwalk {

Distribution vertex_labels(const Substrate& substrate, std::size_t origin_vertex) {
  Distribution d;
  const std::size_t n = substrate.n_vertices();
  d.labels.reserve(n);
  d.probabilities.assign(n, 0.0);
  if (substrate.directional()) {
    d.numeric = true;
    const Label origin = substrate.coordinates(origin_vertex);
    for (std::size_t v = 0; v < n; ++v) {
      Label c = substrate.coordinates(v);
      for (std::size_t a = 0; a < c.size(); ++a) c[a] -= origin[a];
      d.labels.push_back(std::move(c));
    }
  } else {
    for (std::size_t v = 0; v < n; ++v) d.labels.push_back({static_cast<std::int64_t>(v)});
  }
  return d;
}

Distribution position_distribution(const WalkState& state, const Substrate& substrate, std::size_t origin_vertex) {
  if (state.substrate_id != substrate.fingerprint()) {
    throw Error(ErrorKind::Dimension, "walk state does not belong to this substrate");
  }
  Distribution d = vertex_labels(substrate, origin_vertex);
  for (std::size_t v = 0; v < state.n_vertices; ++v) {
    double p = 0;
    for (std::size_t c = 0; c < state.coin_dim; ++c) p += std::norm(state.at(c, v));
    d.probabilities[v] = p;
  }
  return d;
}

Distribution position_distribution(const ContinuousState& state, const Substrate& substrate,
                                   std::size_t origin_vertex) {
  if (state.substrate_id != substrate.fingerprint()) {
    throw Error(ErrorKind::Dimension, "continuous state does not belong to this substrate");
  }
  Distribution d = vertex_labels(substrate, origin_vertex);
  for (std::size_t v = 0; v < state.amplitudes.size(); ++v) d.probabilities[v] = std::norm(state.amplitudes[v]);
  return d;
}

Distribution position_distribution(const DensityState& state, const Substrate& substrate,
                                   std::size_t origin_vertex) {
  if (state.substrate_id != substrate.fingerprint()) {
    throw Error(ErrorKind::Dimension, "density state does not belong to this substrate");
  }
  Distribution d = vertex_labels(substrate, origin_vertex);
  const std::size_t dim = state.coin_dim;
  for (std::size_t v = 0; v < state.n_vertices; ++v) {
    double p = 0;
    for (std::size_t c = 0; c < dim; ++c) {
      const auto i = static_cast<Eigen::Index>(v * dim + c);
      p += state.matrix(i, i).real();
    }
    d.probabilities[v] = p;
  }
  return d;
}

Distribution position_distribution(const MultiWalkerState& state, const Substrate& substrate,
                                   std::size_t origin_vertex) {
  if (state.substrate_id != substrate.fingerprint()) {
    throw Error(ErrorKind::Dimension, "multiwalker state does not belong to this substrate");
  }
  Distribution d = vertex_labels(substrate, origin_vertex);
  const double w = 1.0 / static_cast<double>(state.walkers);
  for (std::size_t idx = 0; idx < state.amplitudes.size(); ++idx) {
    const double p = std::norm(state.amplitudes[idx]);
    if (p == 0.0) continue;
    std::size_t rest = idx;
    for (std::size_t k = 0; k < state.walkers; ++k) {
      d.probabilities[(rest % state.modes()) / state.coin_dim] += w * p;
      rest /= state.modes();
    }
  }
  return d;
}

Distribution joint_distribution(const MultiWalkerState& state, const Substrate& substrate,
                                std::size_t origin_vertex) {
  if (state.substrate_id != substrate.fingerprint()) {
    throw Error(ErrorKind::Dimension, "multiwalker state does not belong to this substrate");
  }
  const Distribution single = vertex_labels(substrate, origin_vertex);
  const std::size_t sites = state.sites;
  std::size_t n = 1;
  for (std::size_t w = 0; w < state.walkers; ++w) n *= sites;

  Distribution d;
  d.numeric = false;
  d.probabilities.assign(n, 0.0);
  d.labels.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    Label l;
    std::size_t rest = j;
    std::vector<std::size_t> v(state.walkers);
    for (std::size_t w = state.walkers; w-- > 0;) {
      v[w] = rest % sites;
      rest /= sites;
    }
    for (std::size_t w = 0; w < state.walkers; ++w) l.insert(l.end(), single.labels[v[w]].begin(), single.labels[v[w]].end());
    d.labels.push_back(std::move(l));
  }
  for (std::size_t idx = 0; idx < state.amplitudes.size(); ++idx) {
    std::size_t rest = idx, j = 0, weight = 1;
    for (std::size_t w = state.walkers; w-- > 0;) {
      j += ((rest % state.modes()) / state.coin_dim) * weight;
      rest /= state.modes();
      weight *= sites;
    }
    d.probabilities[j] += std::norm(state.amplitudes[idx]);
  }
  return d;
}

std::uint64_t qubits_needed(std::uint64_t steps) {
  if (steps == 0) throw Error(ErrorKind::InvalidParameter, "qubits_needed needs T >= 1");
  // ceil(log2(x)) = bit_width(x - 1) for x >= 1, with x = 2T + 1.
  return static_cast<std::uint64_t>(std::bit_width(2 * steps)) + 1;
}

std::uint64_t amplitude_capacity(std::uint64_t memory_bytes, std::uint64_t bytes_per_float) {
  if (bytes_per_float != 4 && bytes_per_float != 8) {
    throw Error(ErrorKind::InvalidParameter, "bytes per float must be 4 or 8, got " + std::to_string(bytes_per_float));
  }
  return memory_bytes / (2 * bytes_per_float);
}

std::uint64_t density_capacity(std::uint64_t memory_bytes, std::uint64_t bytes_per_float) {
  const std::uint64_t cap = amplitude_capacity(memory_bytes, bytes_per_float);
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(cap)));
  while (r * r > cap) --r;
  while ((r + 1) * (r + 1) <= cap) ++r;
  return r;
}

double spreading_exponent(std::span<const double> times, std::span<const double> sigmas) {
  if (times.size() != sigmas.size() || times.size() < 2) {
    throw Error(ErrorKind::InvalidParameter, "spreading fit needs at least two (T, sigma) pairs");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double x = std::log(times[i]), y = std::log(sigmas[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

EnsembleResult percolation_ensemble(const Substrate& base, PercolationMode mode, double p, const CoinOperator& coin,
                                    const InitialCoinSpec& initial, std::uint64_t steps, std::size_t runs,
                                    std::uint64_t seed, std::size_t threads, const NoiseModel& noise) {
  noise.validate();
  auto job = [&](std::size_t r) {
    const Substrate sub = percolate(base, {mode, p, derive_seed(seed, r, 2)});
    const WalkState psi0 = initial_state(initial, sub);
    const WalkState psi = noise.active() ? evolve_trajectory(psi0, coin, sub, noise, steps, derive_seed(seed, r))
                                         : evolve(psi0, coin, sub, steps);
    return position_distribution(psi, sub, initial.start_vertex);
  };
  if (p == 1.0 && !noise.active()) {
    // Every realization is the clean substrate; one run gives the exact mean.
    EnsembleResult res = run_ensemble(1, 1, job);
    res.runs = runs;
    return res;
  }
  return run_ensemble(runs, threads, job);
}

}  // namespace qwalk
