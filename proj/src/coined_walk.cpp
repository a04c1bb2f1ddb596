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

#include "qwalk/coined_walk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qwalk/error.hpp"

namespace qwalk {

CoinOperator::CoinOperator(std::size_t dimension, std::vector<Complex> row_major, double tolerance)
    : dim_(dimension), m_(std::move(row_major)) {
  if (dim_ == 0) throw Error(ErrorKind::InvalidDimension, "coin dimension must be positive");
  if (m_.size() != dim_ * dim_) {
    throw Error(ErrorKind::InvalidDimension, "coin matrix has " + std::to_string(m_.size()) +
                                                 " entries, expected " + std::to_string(dim_ * dim_));
  }
  if (const double defect = unitarity_defect(); !(defect <= tolerance)) {
    throw Error(ErrorKind::InvalidParameter, "coin is not unitary (defect " + std::to_string(defect) + ")");
  }
}

CoinOperator CoinOperator::adjoint() const {
  std::vector<Complex> a(m_.size());
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) a[j * dim_ + i] = std::conj(m_[i * dim_ + j]);
  return CoinOperator(dim_, std::move(a), 1.0);
}

void CoinOperator::apply(std::span<Complex> block) const {
  if (dim_ == 2) {
    const Complex a = block[0], b = block[1];
    block[0] = m_[0] * a + m_[1] * b;
    block[1] = m_[2] * a + m_[3] * b;
    return;
  }
  Complex tmp[16];
  std::vector<Complex> heap;
  Complex* out = tmp;
  if (dim_ > 16) {
    heap.resize(dim_);
    out = heap.data();
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    Complex acc = 0;
    for (std::size_t j = 0; j < dim_; ++j) acc += m_[i * dim_ + j] * block[j];
    out[i] = acc;
  }
  std::copy(out, out + dim_, block.begin());
}

double CoinOperator::unitarity_defect() const {
  double worst = 0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      Complex acc = 0;
      for (std::size_t k = 0; k < dim_; ++k) acc += std::conj(m_[k * dim_ + i]) * m_[k * dim_ + j];
      worst = std::max(worst, std::abs(acc - Complex(i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

CoinOperator hadamard_coin() {
  const double r = 1.0 / std::numbers::sqrt2;
  return CoinOperator(2, {r, r, r, -r});
}

CoinOperator grover_coin(std::size_t d) {
  if (d == 0) throw Error(ErrorKind::InvalidDimension, "grover coin needs d >= 1");
  std::vector<Complex> m(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m[i * d + j] = 2.0 / static_cast<double>(d) - (i == j ? 1.0 : 0.0);
  return CoinOperator(d, std::move(m));
}

CoinOperator dft_coin(std::size_t d) {
  if (d == 0) throw Error(ErrorKind::InvalidDimension, "dft coin needs d >= 1");
  std::vector<Complex> m(d * d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < d; ++k) {
      // Reduce jk mod d before scaling so the phases stay exact for large d.
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % d) / static_cast<double>(d);
      m[j * d + k] = std::polar(norm, angle);
    }
  }
  return CoinOperator(d, std::move(m));
}

double WalkState::norm_squared() const {
  double s = 0;
  for (const Complex& a : amplitudes) s += std::norm(a);
  return s;
}

WalkState localized_state(const Substrate& substrate, std::size_t vertex, std::span<const Complex> coin_vector) {
  if (vertex >= substrate.n_vertices()) {
    throw Error(ErrorKind::OutOfRange, "start vertex " + std::to_string(vertex) + " out of range");
  }
  const std::size_t d = substrate.coin_slots();
  if (coin_vector.size() != d) {
    throw Error(ErrorKind::Dimension, "coin vector has " + std::to_string(coin_vector.size()) +
                                          " entries, substrate needs " + std::to_string(d));
  }
  double norm = 0;
  for (const Complex& c : coin_vector) norm += std::norm(c);
  if (!(norm > 0)) throw Error(ErrorKind::InvalidParameter, "coin vector is zero");
  WalkState s;
  s.substrate_id = substrate.fingerprint();
  s.coin_dim = d;
  s.n_vertices = substrate.n_vertices();
  s.amplitudes.assign(d * s.n_vertices, Complex{});
  const double scale = 1.0 / std::sqrt(norm);
  for (std::size_t c = 0; c < d; ++c) s.at(c, vertex) = coin_vector[c] * scale;
  return s;
}

WalkState initial_state(const InitialCoinSpec& spec, const Substrate& substrate) {
  if (!(spec.b >= 0.0 && spec.b <= 1.0)) throw Error(ErrorKind::InvalidParameter, "bias b must lie in [0,1]");
  const std::size_t d = substrate.coin_slots();
  if (d < 2) throw Error(ErrorKind::Dimension, "biased initial coin state needs at least two coin slots");
  std::vector<Complex> coin(d);
  coin[0] = std::sqrt(spec.b);
  coin[1] = std::polar(std::sqrt(1.0 - spec.b), spec.beta);
  return localized_state(substrate, spec.start_vertex, coin);
}

CoinedWalk::CoinedWalk(CoinOperator coin, const Substrate& substrate)
    : coin_(std::move(coin)), coin_adjoint_(coin_.adjoint()), substrate_id_(substrate.fingerprint()) {
  const std::size_t d = coin_.dimension();
  if (d != substrate.coin_slots()) {
    throw Error(ErrorKind::Dimension, "coin dimension " + std::to_string(d) + " does not match substrate (needs " +
                                          std::to_string(substrate.coin_slots()) + ")");
  }
  const std::size_t n = substrate.n_vertices();
  const bool directional = substrate.directional();
  target_.resize(d * n);
  std::vector<std::ptrdiff_t> port_of_slot(d);
  for (std::size_t v = 0; v < n; ++v) {
    auto ports = substrate.ports(v);
    std::fill(port_of_slot.begin(), port_of_slot.end(), -1);
    for (std::size_t k = 0; k < ports.size(); ++k) port_of_slot[ports[k].slot] = static_cast<std::ptrdiff_t>(k);
    for (std::size_t c = 0; c < d; ++c) {
      const std::size_t from = v * d + c;
      if (port_of_slot[c] < 0) {
        target_[from] = directional ? v * d + (c ^ 1u) : from;
        continue;
      }
      const std::size_t u = ports[static_cast<std::size_t>(port_of_slot[c])].neighbour;
      if (directional) {
        target_[from] = u * d + c;
      } else {
        auto back = substrate.ports(u);
        auto it = std::find_if(back.begin(), back.end(), [v](const Port& p) { return p.neighbour == v; });
        target_[from] = u * d + it->slot;
      }
    }
  }
  source_.assign(target_.size(), 0);
  for (std::size_t i = 0; i < target_.size(); ++i) source_[target_[i]] = i;
}

void CoinedWalk::apply_coin(std::span<Complex> amplitudes) const {
  const std::size_t d = coin_.dimension();
  for (std::size_t off = 0; off < amplitudes.size(); off += d) coin_.apply(amplitudes.subspan(off, d));
}

void CoinedWalk::apply_coin_adjoint(std::span<Complex> amplitudes) const {
  const std::size_t d = coin_.dimension();
  for (std::size_t off = 0; off < amplitudes.size(); off += d) coin_adjoint_.apply(amplitudes.subspan(off, d));
}

void CoinedWalk::apply_shift(std::span<const Complex> in, std::span<Complex> out) const {
  for (std::size_t i = 0; i < target_.size(); ++i) out[target_[i]] = in[i];
}

void CoinedWalk::apply_shift_adjoint(std::span<const Complex> in, std::span<Complex> out) const {
  for (std::size_t i = 0; i < source_.size(); ++i) out[source_[i]] = in[i];
}

void CoinedWalk::step(std::span<Complex> amplitudes, std::vector<Complex>& scratch) const {
  apply_coin(amplitudes);
  scratch.resize(amplitudes.size());
  apply_shift(amplitudes, scratch);
  std::copy(scratch.begin(), scratch.end(), amplitudes.begin());
}

void CoinedWalk::step_adjoint(std::span<Complex> amplitudes, std::vector<Complex>& scratch) const {
  scratch.resize(amplitudes.size());
  apply_shift_adjoint(amplitudes, scratch);
  std::copy(scratch.begin(), scratch.end(), amplitudes.begin());
  apply_coin_adjoint(amplitudes);
}

void CoinedWalk::check(const WalkState& state) const {
  if (state.substrate_id != substrate_id_ || state.amplitudes.size() != target_.size() ||
      state.coin_dim != coin_.dimension()) {
    throw Error(ErrorKind::Dimension, "walk state does not belong to this substrate/coin");
  }
}

void CoinedWalk::step(WalkState& state) const {
  check(state);
  std::vector<Complex> scratch;
  step(state.amplitudes, scratch);
  ++state.step_count;
}

void CoinedWalk::step_adjoint(WalkState& state) const {
  check(state);
  std::vector<Complex> scratch;
  step_adjoint(state.amplitudes, scratch);
  if (state.step_count > 0) --state.step_count;
}

void CoinedWalk::evolve(WalkState& state, std::uint64_t steps) const {
  check(state);
  std::vector<Complex> scratch(state.amplitudes.size());
  for (std::uint64_t t = 0; t < steps; ++t) {
    apply_coin(state.amplitudes);
    apply_shift(state.amplitudes, scratch);
    state.amplitudes.swap(scratch);
  }
  state.step_count += steps;
}

WalkState step(const WalkState& state, const CoinOperator& coin, const Substrate& substrate) {
  WalkState out = state;
  CoinedWalk(coin, substrate).step(out);
  return out;
}

WalkState evolve(WalkState state, const CoinOperator& coin, const Substrate& substrate, std::uint64_t steps) {
  CoinedWalk(coin, substrate).evolve(state, steps);
  return state;
}

}  // namespace qwalk
