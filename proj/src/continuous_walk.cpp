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

#include "qwalk/continuous_walk.hpp"

#include <cmath>
#include <string>

#include "qwalk/error.hpp"

namespace qwalk {

Hamiltonian::Hamiltonian(const Substrate& substrate, double gamma)
    : substrate_id_(substrate.fingerprint()), gamma_(gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorKind::InvalidParameter, "hopping rate gamma must be positive");
  }
  const auto n = static_cast<Eigen::Index>(substrate.n_vertices());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * substrate.n_edges());
  for (auto [u, v] : substrate.edges()) {
    triplets.emplace_back(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v), gamma);
    triplets.emplace_back(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u), gamma);
  }
  matrix_.resize(n, n);
  matrix_.setFromTriplets(triplets.begin(), triplets.end());
  matrix_.makeCompressed();
  norm_bound_ = gamma * static_cast<double>(substrate.max_degree());
}

void Hamiltonian::apply(std::span<const Complex> in, std::span<Complex> out) const {
  // Symmetric: column k holds row k.
  for (Eigen::Index k = 0; k < matrix_.outerSize(); ++k) {
    Complex acc = 0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix_, k); it; ++it) {
      acc += it.value() * in[static_cast<std::size_t>(it.row())];
    }
    out[static_cast<std::size_t>(k)] = acc;
  }
}

HermitianOperator Hamiltonian::as_operator() const {
  return {dimension(), norm_bound_, [this](std::span<const Complex> in, std::span<Complex> out) { apply(in, out); }};
}

Hamiltonian build_hamiltonian(const Substrate& substrate, double gamma) { return Hamiltonian(substrate, gamma); }

double ContinuousState::norm_squared() const {
  double s = 0;
  for (const Complex& a : amplitudes) s += std::norm(a);
  return s;
}

ContinuousState vertex_state(const Substrate& substrate, std::size_t vertex) {
  if (vertex >= substrate.n_vertices()) {
    throw Error(ErrorKind::OutOfRange, "start vertex " + std::to_string(vertex) + " out of range");
  }
  ContinuousState s;
  s.substrate_id = substrate.fingerprint();
  s.amplitudes.assign(substrate.n_vertices(), Complex{});
  s.amplitudes[vertex] = 1.0;
  return s;
}

ContinuousState evolve_ct(const ContinuousState& state, const Hamiltonian& h, double t,
                          const PropagationOptions& options, PropagationReport* report) {
  if (state.amplitudes.size() != h.dimension() || state.substrate_id != h.substrate_id()) {
    throw Error(ErrorKind::Dimension, "state does not belong to the Hamiltonian's substrate");
  }
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorKind::InvalidParameter, "evolution time must be >= 0");
  ContinuousState out = state;
  out.time += t;
  const bool dense = options.method == ExpMethod::Dense ||
                     (options.method == ExpMethod::Auto && h.dimension() <= options.dense_limit);
  if (dense) {
    propagate_dense(Eigen::MatrixXd(h.matrix()), t, out.amplitudes);
    if (report) *report = {ExpMethod::Dense, 1, 0.0};
  } else {
    propagate_krylov(h.as_operator(), t, out.amplitudes, options, report);
  }
  return out;
}

double energy(const ContinuousState& state, const Hamiltonian& h) {
  std::vector<Complex> hpsi(state.amplitudes.size());
  h.apply(state.amplitudes, hpsi);
  Complex e = 0;
  for (std::size_t i = 0; i < hpsi.size(); ++i) e += std::conj(state.amplitudes[i]) * hpsi[i];
  return e.real();
}

double boundary_probability(const ContinuousState& state, const Substrate& substrate) {
  if (!substrate.directional() || substrate.boundary() == Boundary::Periodic) return 0.0;
  const auto& dims = substrate.dims();
  double p = 0;
  for (std::size_t v = 0; v < substrate.n_vertices(); ++v) {
    const auto c = substrate.coordinates(v);
    for (std::size_t a = 0; a < dims.size(); ++a) {
      if (c[a] == 0 || c[a] + 1 == static_cast<std::int64_t>(dims[a])) {
        p += std::norm(state.amplitudes[v]);
        break;
      }
    }
  }
  return p;
}

}  // namespace qwalk
