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

#ifndef QWALK_COINED_WALK_HPP
#define QWALK_COINED_WALK_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qwalk/substrate.hpp"

namespace qwalk {

using Complex = std::complex<double>;

/// Unitary d x d coin, row-major.
class CoinOperator {
 public:
  /// Throws InvalidDimension for d = 0 or a size mismatch and
  /// InvalidParameter when the matrix is not unitary within `tolerance`.
  CoinOperator(std::size_t dimension, std::vector<Complex> row_major, double tolerance = 1e-12);

  std::size_t dimension() const noexcept { return dim_; }
  Complex operator()(std::size_t row, std::size_t col) const { return m_[row * dim_ + col]; }
  const std::vector<Complex>& matrix() const noexcept { return m_; }

  CoinOperator adjoint() const;

  /// In-place action on one vertex's coin block of length dimension().
  void apply(std::span<Complex> block) const;

  /// Largest |(C^dagger C - 1)_ij|.
  double unitarity_defect() const;

 private:
  std::size_t dim_;
  std::vector<Complex> m_;
};

/// (1/sqrt2)[[1, 1], [1, -1]] in basis order (|-1>, |+1>).
CoinOperator hadamard_coin();
/// Entries 2/d - delta_ij.
CoinOperator grover_coin(std::size_t d);
/// Entries exp(2 pi i jk/d)/sqrt(d).
CoinOperator dft_coin(std::size_t d);

/// Amplitudes over (coin, vertex) with vertex-major layout: index = v*coin_dim + c.
/// On a line, c = 0 is |-1> (left) and c = 1 is |+1> (right).
struct WalkState {
  std::uint64_t substrate_id = 0;
  std::size_t coin_dim = 0;
  std::size_t n_vertices = 0;
  std::vector<Complex> amplitudes;
  std::uint64_t step_count = 0;

  Complex& at(std::size_t coin, std::size_t vertex) { return amplitudes[vertex * coin_dim + coin]; }
  Complex at(std::size_t coin, std::size_t vertex) const { return amplitudes[vertex * coin_dim + coin]; }
  double norm_squared() const;
};

struct InitialCoinSpec {
  double b = 0.5;
  double beta = 0.0;
  std::size_t start_vertex = 0;
};

/// sqrt(b)|-1, start> + e^{i beta} sqrt(1-b)|+1, start>.
WalkState initial_state(const InitialCoinSpec& spec, const Substrate& substrate);

/// Arbitrary coin vector (length coin_slots) at one vertex; normalized.
WalkState localized_state(const Substrate& substrate, std::size_t vertex, std::span<const Complex> coin_vector);

/// One step U = S (C x 1) bound to a substrate. The shift is a permutation
/// of basis indices, precomputed once:
///  - lattice substrates: (c, v) -> (c, u) with u the slot-c neighbour;
///  - plain graphs (flip-flop): (k, v) -> (k', u) with k' the port of the
///    same edge at u;
///  - a slot with no edge keeps the amplitude at v (reversing the direction
///    slot on lattices, unchanged on plain graphs).
class CoinedWalk {
 public:
  CoinedWalk(CoinOperator coin, const Substrate& substrate);

  const CoinOperator& coin() const noexcept { return coin_; }
  std::size_t dimension() const noexcept { return target_.size(); }
  std::size_t coin_dim() const noexcept { return coin_.dimension(); }
  std::uint64_t substrate_id() const noexcept { return substrate_id_; }

  /// Basis index that amplitude at `index` moves to under the shift.
  std::size_t shift_target(std::size_t index) const { return target_[index]; }

  void apply_coin(std::span<Complex> amplitudes) const;
  void apply_coin_adjoint(std::span<Complex> amplitudes) const;
  void apply_shift(std::span<const Complex> in, std::span<Complex> out) const;
  void apply_shift_adjoint(std::span<const Complex> in, std::span<Complex> out) const;

  /// U applied in place; `scratch` is resized as needed.
  void step(std::span<Complex> amplitudes, std::vector<Complex>& scratch) const;
  void step_adjoint(std::span<Complex> amplitudes, std::vector<Complex>& scratch) const;

  void step(WalkState& state) const;
  void step_adjoint(WalkState& state) const;
  void evolve(WalkState& state, std::uint64_t steps) const;

  /// Throws Dimension unless `state` was built on this walk's substrate and coin size.
  void check(const WalkState& state) const;

 private:
  CoinOperator coin_;
  CoinOperator coin_adjoint_;
  std::uint64_t substrate_id_;
  std::vector<std::size_t> target_;
  std::vector<std::size_t> source_;
};

WalkState step(const WalkState& state, const CoinOperator& coin, const Substrate& substrate);
WalkState evolve(WalkState state, const CoinOperator& coin, const Substrate& substrate, std::uint64_t steps);

}  // namespace qwalk

#endif  // QWALK_COINED_WALK_HPP
