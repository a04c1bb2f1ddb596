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

#ifndef QWALK_CONTINUOUS_WALK_HPP
#define QWALK_CONTINUOUS_WALK_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Sparse>

#include "qwalk/propagator.hpp"
#include "qwalk/substrate.hpp"

namespace qwalk {

/// H = gamma * A: gamma on every edge, zero diagonal.
class Hamiltonian {
 public:
  Hamiltonian(const Substrate& substrate, double gamma);

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  double gamma() const noexcept { return gamma_; }
  std::uint64_t substrate_id() const noexcept { return substrate_id_; }
  const Eigen::SparseMatrix<double>& matrix() const noexcept { return matrix_; }

  /// gamma * max degree; bounds the spectral radius.
  double norm_bound() const noexcept { return norm_bound_; }

  void apply(std::span<const Complex> in, std::span<Complex> out) const;
  HermitianOperator as_operator() const;

 private:
  std::uint64_t substrate_id_;
  double gamma_;
  double norm_bound_;
  Eigen::SparseMatrix<double> matrix_;
};

/// Throws InvalidParameter unless gamma > 0.
Hamiltonian build_hamiltonian(const Substrate& substrate, double gamma = 1.0);

struct ContinuousState {
  std::uint64_t substrate_id = 0;
  std::vector<Complex> amplitudes;
  double time = 0.0;

  double norm_squared() const;
};

ContinuousState vertex_state(const Substrate& substrate, std::size_t vertex);

/// exp(-i H t)|psi>. Dense Pade exponential up to options.dense_limit
/// vertices, Lanczos propagation above.
ContinuousState evolve_ct(const ContinuousState& state, const Hamiltonian& h, double t,
                          const PropagationOptions& options = {}, PropagationReport* report = nullptr);

/// <psi|H|psi>
double energy(const ContinuousState& state, const Hamiltonian& h);

/// Probability on lattice boundary vertices (some coordinate at 0 or at its
/// axis end) of an open lattice; 0 for periodic lattices and plain graphs.
/// Reports how much a truncated line has felt its ends.
double boundary_probability(const ContinuousState& state, const Substrate& substrate);

}  // namespace qwalk

#endif  // QWALK_CONTINUOUS_WALK_HPP
