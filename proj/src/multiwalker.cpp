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

#include "qwalk/multiwalker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qwalk/error.hpp"

namespace qwalk {
namespace {

std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (__builtin_mul_overflow(r, base, &r)) return std::numeric_limits<std::uint64_t>::max();
  }
  return r;
}

std::size_t int_pow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

// Coinciding unordered walker pairs in every configuration.
std::vector<std::uint8_t> pair_counts(const MultiWalkerState& s) {
  std::vector<std::uint8_t> pairs(s.amplitudes.size());
  std::vector<std::size_t> vertex(s.walkers);
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    std::size_t rest = idx;
    for (std::size_t w = s.walkers; w-- > 0;) {
      vertex[w] = (rest % s.modes()) / s.coin_dim;
      rest /= s.modes();
    }
    unsigned count = 0;
    for (std::size_t a = 0; a < s.walkers; ++a)
      for (std::size_t b = a + 1; b < s.walkers; ++b) count += vertex[a] == vertex[b];
    pairs[idx] = static_cast<std::uint8_t>(count);
  }
  return pairs;
}

void check_state(const MultiWalkerState& s, const Substrate& substrate, WalkKind kind) {
  if (s.kind != kind) {
    throw Error(ErrorKind::InvalidParameter, kind == WalkKind::Continuous ? "state is not a continuous-walk state"
                                                                          : "state is not a coined-walk state");
  }
  if (s.substrate_id != substrate.fingerprint() || s.sites != substrate.n_vertices()) {
    throw Error(ErrorKind::Dimension, "multiwalker state does not belong to this substrate");
  }
}

}  // namespace

const char* to_string(Statistics s) noexcept {
  switch (s) {
    case Statistics::Distinguishable: return "distinguishable";
    case Statistics::Boson: return "boson";
    case Statistics::Fermion: return "fermion";
  }
  return "distinguishable";
}

const char* to_string(InteractionKind k) noexcept {
  switch (k) {
    case InteractionKind::None: return "none";
    case InteractionKind::CollisionPhase: return "collision_phase";
    case InteractionKind::Hubbard: return "hubbard";
  }
  return "none";
}

GuardResult check_dimension(std::uint64_t sites, std::uint64_t walkers, std::uint64_t coin_dim,
                            std::uint64_t budget, WalkKind kind) noexcept {
  GuardResult g;
  g.budget = budget;
  std::uint64_t base = sites;
  if (kind == WalkKind::DiscreteCoined && __builtin_mul_overflow(sites, coin_dim, &base)) {
    base = std::numeric_limits<std::uint64_t>::max();
  }
  g.required = saturating_pow(base, walkers);
  g.ok = sites > 0 && walkers > 0 && g.required <= budget;
  const std::string space =
      kind == WalkKind::DiscreteCoined
          ? "(" + std::to_string(coin_dim) + "*" + std::to_string(sites) + ")^" + std::to_string(walkers)
          : std::to_string(sites) + "^" + std::to_string(walkers);
  const std::string required = g.required == std::numeric_limits<std::uint64_t>::max()
                                   ? std::string("more than 1.8e19")
                                   : std::to_string(g.required);
  g.message = "configuration space " + space + " = " + required + " amplitudes; budget " + std::to_string(budget);
  return g;
}

void dimension_guard(std::uint64_t sites, std::uint64_t walkers, std::uint64_t coin_dim, std::uint64_t budget,
                     WalkKind kind) {
  if (sites == 0 || walkers == 0) throw Error(ErrorKind::InvalidSize, "need at least one site and one walker");
  if (const GuardResult g = check_dimension(sites, walkers, coin_dim, budget, kind); !g.ok) {
    throw Error(ErrorKind::Resource, g.message);
  }
}

double MultiWalkerState::norm_squared() const {
  double s = 0;
  for (const Complex& a : amplitudes) s += std::norm(a);
  return s;
}

std::vector<std::size_t> MultiWalkerState::decode(std::size_t index) const {
  std::vector<std::size_t> m(walkers);
  for (std::size_t w = walkers; w-- > 0;) {
    m[w] = index % modes();
    index /= modes();
  }
  return m;
}

MultiWalkerState make_multiwalker(const Substrate& substrate, Statistics statistics, WalkKind kind,
                                  std::span<const std::vector<Complex>> single_states, std::uint64_t budget) {
  const std::size_t walkers = single_states.size();
  const std::size_t coin_dim = kind == WalkKind::DiscreteCoined ? substrate.coin_slots() : 1;
  dimension_guard(substrate.n_vertices(), walkers, coin_dim, budget, kind);

  MultiWalkerState s;
  s.walkers = walkers;
  s.sites = substrate.n_vertices();
  s.coin_dim = coin_dim;
  s.statistics = statistics;
  s.kind = kind;
  s.substrate_id = substrate.fingerprint();
  const std::size_t modes = s.modes();
  for (const auto& single : single_states) {
    if (single.size() != modes) {
      throw Error(ErrorKind::Dimension, "single-walker state has " + std::to_string(single.size()) +
                                            " entries, expected " + std::to_string(modes));
    }
  }
  const std::size_t n = int_pow(modes, walkers);
  s.amplitudes.assign(n, Complex{});

  std::vector<std::size_t> perm(walkers);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    double sign = 1.0;
    if (statistics == Statistics::Fermion) {
      for (std::size_t a = 0; a < walkers; ++a)
        for (std::size_t b = a + 1; b < walkers; ++b)
          if (perm[a] > perm[b]) sign = -sign;
    }
    for (std::size_t idx = 0; idx < n; ++idx) {
      Complex amp = sign;
      std::size_t rest = idx;
      for (std::size_t w = walkers; w-- > 0 && amp != Complex{};) {
        amp *= single_states[perm[w]][rest % modes];
        rest /= modes;
      }
      s.amplitudes[idx] += amp;
    }
    if (statistics == Statistics::Distinguishable) break;
  } while (std::next_permutation(perm.begin(), perm.end()));

  const double norm = std::sqrt(s.norm_squared());
  if (!(norm > 1e-12)) {
    throw Error(ErrorKind::InvalidParameter, "(anti)symmetrized multiwalker state vanishes");
  }
  for (Complex& a : s.amplitudes) a /= norm;
  return s;
}

double exchange_defect(const MultiWalkerState& state) {
  if (state.statistics == Statistics::Distinguishable || state.walkers < 2) return 0.0;
  const double sign = state.statistics == Statistics::Boson ? 1.0 : -1.0;
  const std::size_t modes = state.modes();
  double worst = 0;
  for (std::size_t w = 0; w + 1 < state.walkers; ++w) {
    const std::size_t lo = int_pow(modes, state.walkers - 2 - w);  // stride of walker w+1
    const std::size_t hi = lo * modes;                              // stride of walker w
    for (std::size_t idx = 0; idx < state.amplitudes.size(); ++idx) {
      const std::size_t a = (idx / hi) % modes, b = (idx / lo) % modes;
      const std::size_t swapped = idx - a * hi - b * lo + b * hi + a * lo;
      worst = std::max(worst, std::abs(state.amplitudes[swapped] - sign * state.amplitudes[idx]));
    }
  }
  return worst;
}

MultiWalkerState multi_evolve_dt(const MultiWalkerState& state, const CoinOperator& coin, const Substrate& substrate,
                                 const InteractionSpec& interaction, std::uint64_t steps, std::uint64_t budget) {
  check_state(state, substrate, WalkKind::DiscreteCoined);
  dimension_guard(state.sites, state.walkers, state.coin_dim, budget, WalkKind::DiscreteCoined);
  if (interaction.kind == InteractionKind::Hubbard) {
    throw Error(ErrorKind::InvalidParameter, "hubbard interaction applies to continuous walks only");
  }
  const CoinedWalk walk(coin, substrate);
  if (coin.dimension() != state.coin_dim) throw Error(ErrorKind::Dimension, "coin does not match walker coin space");

  MultiWalkerState out = state;
  const std::size_t m = state.walkers, d = state.coin_dim, modes = state.modes(), n = out.amplitudes.size();

  // Full configuration permutation of one shift.
  std::vector<std::size_t> target(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t rest = idx, t = 0, weight = 1;
    for (std::size_t w = m; w-- > 0;) {
      t += walk.shift_target(rest % modes) * weight;
      rest /= modes;
      weight *= modes;
    }
    target[idx] = t;
  }

  std::vector<Complex> phase_of_pairs;
  std::vector<std::uint8_t> pairs;
  if (interaction.kind == InteractionKind::CollisionPhase) {
    pairs = pair_counts(out);
    for (std::size_t k = 0; k <= m * (m - 1) / 2; ++k) {
      phase_of_pairs.push_back(std::polar(1.0, interaction.phi * static_cast<double>(k)));
    }
  }

  std::vector<Complex> scratch(n), block(d);
  for (std::uint64_t t = 0; t < steps; ++t) {
    for (std::size_t w = 0; w < m; ++w) {
      const std::size_t low = int_pow(modes, m - 1 - w), high = int_pow(modes, w);
      for (std::size_t h = 0; h < high; ++h) {
        for (std::size_t v = 0; v < state.sites; ++v) {
          for (std::size_t l = 0; l < low; ++l) {
            const std::size_t base = (h * modes + v * d) * low + l;
            for (std::size_t c = 0; c < d; ++c) block[c] = out.amplitudes[base + c * low];
            coin.apply(block);
            for (std::size_t c = 0; c < d; ++c) out.amplitudes[base + c * low] = block[c];
          }
        }
      }
    }
    for (std::size_t idx = 0; idx < n; ++idx) scratch[target[idx]] = out.amplitudes[idx];
    out.amplitudes.swap(scratch);
    if (!pairs.empty()) {
      for (std::size_t idx = 0; idx < n; ++idx) {
        if (pairs[idx]) out.amplitudes[idx] *= phase_of_pairs[pairs[idx]];
      }
    }
  }
  out.step_count += steps;
  return out;
}

MultiWalkerState multi_evolve_ct(const MultiWalkerState& state, const Substrate& substrate, double gamma,
                                 const InteractionSpec& interaction, double t, const PropagationOptions& options,
                                 std::uint64_t budget, PropagationReport* report) {
  check_state(state, substrate, WalkKind::Continuous);
  dimension_guard(state.sites, state.walkers, 1, budget, WalkKind::Continuous);
  if (!(gamma > 0.0)) throw Error(ErrorKind::InvalidParameter, "hopping rate gamma must be positive");
  if (!(t >= 0.0)) throw Error(ErrorKind::InvalidParameter, "evolution time must be >= 0");
  if (interaction.kind == InteractionKind::CollisionPhase) {
    throw Error(ErrorKind::InvalidParameter, "collision_phase interaction applies to coined walks only");
  }
  const double u = interaction.kind == InteractionKind::Hubbard ? interaction.U : 0.0;
  const std::size_t m = state.walkers, sites = state.sites, n = state.amplitudes.size();

  std::vector<std::uint8_t> pairs = pair_counts(state);
  std::vector<std::size_t> stride(m);
  for (std::size_t w = 0; w < m; ++w) stride[w] = int_pow(sites, m - 1 - w);

  auto apply = [&](std::span<const Complex> in, std::span<Complex> out) {
    for (std::size_t idx = 0; idx < n; ++idx) {
      Complex acc = u * static_cast<double>(pairs[idx]) * in[idx];
      for (std::size_t w = 0; w < m; ++w) {
        const std::size_t v = (idx / stride[w]) % sites;
        const std::size_t base = idx - v * stride[w];
        for (const Port& p : substrate.ports(v)) acc += gamma * in[base + p.neighbour * stride[w]];
      }
      out[idx] = acc;
    }
  };

  MultiWalkerState out = state;
  out.time += t;
  const bool dense =
      options.method == ExpMethod::Dense || (options.method == ExpMethod::Auto && n <= options.dense_limit);
  if (dense) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t idx = 0; idx < n; ++idx) {
      const auto i = static_cast<Eigen::Index>(idx);
      h(i, i) = u * static_cast<double>(pairs[idx]);
      for (std::size_t w = 0; w < m; ++w) {
        const std::size_t v = (idx / stride[w]) % sites;
        const std::size_t base = idx - v * stride[w];
        for (const Port& p : substrate.ports(v)) h(static_cast<Eigen::Index>(base + p.neighbour * stride[w]), i) += gamma;
      }
    }
    propagate_dense(h, t, out.amplitudes);
    if (report) *report = {ExpMethod::Dense, 1, 0.0};
  } else {
    const double bound = static_cast<double>(m) * gamma * static_cast<double>(substrate.max_degree()) +
                         std::abs(u) * static_cast<double>(m * (m - 1) / 2);
    propagate_krylov({n, bound, apply}, t, out.amplitudes, options, report);
  }
  return out;
}

}  // namespace qwalk
