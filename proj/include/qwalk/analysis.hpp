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

#ifndef QWALK_ANALYSIS_HPP
#define QWALK_ANALYSIS_HPP

#include <cstddef>
#include <cstdint>
#include <span>

#include "qwalk/coined_walk.hpp"
#include "qwalk/continuous_walk.hpp"
#include "qwalk/decoherence.hpp"
#include "qwalk/distribution.hpp"
#include "qwalk/ensemble.hpp"
#include "qwalk/multiwalker.hpp"
#include "qwalk/substrate.hpp"

namespace qwalk {

/// Labels for the vertices of `substrate`: coordinates relative to
/// `origin_vertex` on lattice-built substrates, bare vertex indices otherwise.
Distribution vertex_labels(const Substrate& substrate, std::size_t origin_vertex = 0);

/// Position law, |amplitude|^2 summed over the coin.
Distribution position_distribution(const WalkState& state, const Substrate& substrate, std::size_t origin_vertex = 0);
Distribution position_distribution(const ContinuousState& state, const Substrate& substrate,
                                   std::size_t origin_vertex = 0);
/// Diagonal of rho summed over the coin.
Distribution position_distribution(const DensityState& state, const Substrate& substrate,
                                   std::size_t origin_vertex = 0);
/// Single-walker marginal averaged over walkers (occupation density / m).
Distribution position_distribution(const MultiWalkerState& state, const Substrate& substrate,
                                   std::size_t origin_vertex = 0);

/// Joint law over walker vertex tuples; labels concatenate per-walker labels.
Distribution joint_distribution(const MultiWalkerState& state, const Substrate& substrate,
                                std::size_t origin_vertex = 0);

/// ceil(log2(2T+1)) position qubits plus one coin qubit.
std::uint64_t qubits_needed(std::uint64_t steps);

/// Amplitudes that fit in memory_bytes at two floats of bytes_per_float each.
std::uint64_t amplitude_capacity(std::uint64_t memory_bytes, std::uint64_t bytes_per_float = 4);

/// Basis states whose density matrix fits: floor(sqrt(amplitude_capacity)).
std::uint64_t density_capacity(std::uint64_t memory_bytes, std::uint64_t bytes_per_float = 4);

/// Least-squares slope of log(sigma) against log(T).
double spreading_exponent(std::span<const double> times, std::span<const double> sigmas);

/// Coined walks on independently percolated copies of `base`. Run i
/// percolates with seed derive_seed(seed, i, 2) and, when noise is active,
/// draws its trajectory with run seed derive_seed(seed, i). Labels are
/// relative to the start vertex.
EnsembleResult percolation_ensemble(const Substrate& base, PercolationMode mode, double p, const CoinOperator& coin,
                                    const InitialCoinSpec& initial, std::uint64_t steps, std::size_t runs,
                                    std::uint64_t seed, std::size_t threads = 1, const NoiseModel& noise = {});

}  // namespace qwalk

#endif  // QWALK_ANALYSIS_HPP
