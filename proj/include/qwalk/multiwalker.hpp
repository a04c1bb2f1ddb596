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

#ifndef QWALK_MULTIWALKER_HPP
#define QWALK_MULTIWALKER_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qwalk/coined_walk.hpp"
#include "qwalk/propagator.hpp"
#include "qwalk/substrate.hpp"

namespace qwalk {

enum class Statistics { Distinguishable, Boson, Fermion };
enum class WalkKind { DiscreteCoined, Continuous };
enum class InteractionKind { None, CollisionPhase, Hubbard };

const char* to_string(Statistics s) noexcept;
const char* to_string(InteractionKind k) noexcept;

/// On-site interaction. collision_phase multiplies every configuration by
/// e^{i phi * (coinciding walker pairs)} after each discrete step; hubbard
/// adds U * sum_x n_x (n_x - 1) / 2 to the continuous Hamiltonian.
struct InteractionSpec {
  InteractionKind kind = InteractionKind::None;
  double phi = 0.0;
  double U = 0.0;
};

/// 2^27 amplitudes: 1 GiB at two 4-byte floats per amplitude.
inline constexpr std::uint64_t kDefaultAmplitudeBudget = std::uint64_t{1} << 27;

struct GuardResult {
  bool ok = false;
  std::uint64_t required = 0;  // saturates at UINT64_MAX
  std::uint64_t budget = 0;
  std::string message;
};

/// (coin_dim * L)^m amplitudes for discrete walks, L^m for continuous ones.
GuardResult check_dimension(std::uint64_t sites, std::uint64_t walkers, std::uint64_t coin_dim,
                            std::uint64_t budget, WalkKind kind) noexcept;

/// Throws Resource with both numbers when the configuration space exceeds
/// `budget` amplitudes.
void dimension_guard(std::uint64_t sites, std::uint64_t walkers, std::uint64_t coin_dim, std::uint64_t budget,
                     WalkKind kind);

/// m walkers in the full distinguishable basis. A walker's mode is
/// v*coin_dim + c (coin_dim = 1 for continuous walks); configuration index
/// sum_w mode_w * modes^(m-1-w), walker 0 most significant.
struct MultiWalkerState {
  std::size_t walkers = 0;
  std::size_t sites = 0;
  std::size_t coin_dim = 1;
  Statistics statistics = Statistics::Distinguishable;
  WalkKind kind = WalkKind::Continuous;
  std::uint64_t substrate_id = 0;
  std::vector<Complex> amplitudes;
  std::uint64_t step_count = 0;
  double time = 0.0;

  std::size_t modes() const noexcept { return coin_dim * sites; }
  double norm_squared() const;
  /// Mode of every walker in configuration `index`.
  std::vector<std::size_t> decode(std::size_t index) const;
};

/// Tensor product of the given single-walker states, (anti)symmetrized over
/// walker permutations for bosons (fermions) and normalized. Each state has
/// coin_slots*n entries (discrete, WalkState layout) or n entries
/// (continuous). Throws InvalidParameter when antisymmetrization vanishes.
MultiWalkerState make_multiwalker(const Substrate& substrate, Statistics statistics, WalkKind kind,
                                  std::span<const std::vector<Complex>> single_states,
                                  std::uint64_t budget = kDefaultAmplitudeBudget);

/// Largest |a(swapped) - sign * a| over adjacent walker swaps; 0 for
/// distinguishable walkers.
double exchange_defect(const MultiWalkerState& state);

/// Per step: coin on every walker, shift every walker, then the collision phase.
MultiWalkerState multi_evolve_dt(const MultiWalkerState& state, const CoinOperator& coin, const Substrate& substrate,
                                 const InteractionSpec& interaction, std::uint64_t steps,
                                 std::uint64_t budget = kDefaultAmplitudeBudget);

/// exp(-i H t) with H = sum_w gamma A_w + U sum_x n_x(n_x-1)/2.
MultiWalkerState multi_evolve_ct(const MultiWalkerState& state, const Substrate& substrate, double gamma,
                                 const InteractionSpec& interaction, double t, const PropagationOptions& options = {},
                                 std::uint64_t budget = kDefaultAmplitudeBudget, PropagationReport* report = nullptr);

}  // namespace qwalk

#endif  // QWALK_MULTIWALKER_HPP
