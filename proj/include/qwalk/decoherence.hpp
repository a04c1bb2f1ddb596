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

#ifndef QWALK_DECOHERENCE_HPP
#define QWALK_DECOHERENCE_HPP

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "qwalk/coined_walk.hpp"
#include "qwalk/distribution.hpp"
#include "qwalk/ensemble.hpp"
#include "qwalk/substrate.hpp"

namespace qwalk {

/// Per-step imperfections of a coined walk, applied after the unitary step.
///
///  - coin_measure / position_measure: with probability `strength` the coin
///    (position) is measured in its basis.
///  - static_phase / fast_phase / slow_phase: a phase e^{i c theta} multiplies
///    coin index c (on the line: diag(1, e^{i theta}) in the |-1>, |+1>
///    basis), theta uniform on [-strength, +strength] with strength <= pi.
///    static: one theta per vertex, drawn once per run. fast: one theta per
///    vertex, redrawn every step. slow: one theta per step shared by all
///    vertices.
enum class NoiseKind { None, CoinMeasure, PositionMeasure, StaticPhase, FastPhase, SlowPhase };

const char* to_string(NoiseKind kind) noexcept;
NoiseKind noise_kind_from_string(const std::string& name);

struct NoiseModel {
  NoiseKind kind = NoiseKind::None;
  double strength = 0.0;
  std::uint64_t seed = 0;

  bool is_phase() const noexcept {
    return kind == NoiseKind::StaticPhase || kind == NoiseKind::FastPhase || kind == NoiseKind::SlowPhase;
  }
  bool active() const noexcept { return kind != NoiseKind::None && strength != 0.0; }

  /// Measurement kinds take strength in [0, 1], phase kinds in [0, pi].
  void validate() const;
};

/// Density matrix over the walk basis (index v*coin_dim + c).
struct DensityState {
  std::uint64_t substrate_id = 0;
  std::size_t coin_dim = 0;
  std::size_t n_vertices = 0;
  Eigen::MatrixXcd matrix;
  std::uint64_t step_count = 0;

  static DensityState pure(const WalkState& psi);

  Complex trace() const { return matrix.trace(); }
  double hermiticity_defect() const;
  double min_eigenvalue() const;
};

/// Default density budget: (2^12 basis states)^2 matrix entries.
inline constexpr std::uint64_t kDensityBudget = std::uint64_t{1} << 24;

struct DensityOptions {
  std::uint64_t memory_budget = kDensityBudget;  // matrix entries
  /// Static and slow noise have no closed-form per-step channel; their
  /// density evolution averages this many disorder realizations; realization
  /// i draws the phases of ensemble_average(..., seed = noise.seed) run i.
  std::size_t disorder_runs = 100;
};

/// Checks the N^2 entries of a density matrix against the budget; throws
/// Resource naming required vs. available.
void check_density_budget(std::size_t basis_states, std::uint64_t budget);

/// rho -> U rho U^dagger followed by the noise channel, T times. Coin and
/// position measurement use Kraus projectors weighted by `strength`;
/// fast_phase uses its exact phase average.
DensityState evolve_density(const DensityState& rho0, const CoinOperator& coin, const Substrate& substrate,
                            const NoiseModel& noise, std::uint64_t steps, const DensityOptions& options = {});

/// One stochastic realization. Its random stream is
/// Rng(derive_seed(noise.seed, run_seed, 1)); strength 0 reproduces the pure
/// walk bit for bit.
WalkState evolve_trajectory(const WalkState& psi0, const CoinOperator& coin, const Substrate& substrate,
                            const NoiseModel& noise, std::uint64_t steps, std::uint64_t run_seed);

/// Mean position law over `runs` trajectories; run i uses
/// run_seed = derive_seed(seed, i). Labels are substrate coordinates
/// relative to `origin` when the substrate has coordinates.
EnsembleResult ensemble_average(const WalkState& psi0, const CoinOperator& coin, const Substrate& substrate,
                                const NoiseModel& noise, std::uint64_t steps, std::size_t runs, std::uint64_t seed,
                                std::size_t threads = 1, std::size_t origin_vertex = 0);

}  // namespace qwalk

#endif  // QWALK_DECOHERENCE_HPP
