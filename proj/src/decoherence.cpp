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

#include "qwalk/decoherence.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "qwalk/analysis.hpp"
#include "qwalk/error.hpp"
#include "qwalk/rng.hpp"

namespace qwalk {
namespace {

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

// Draws phase disorder in a fixed order so trajectories and density
// realizations built from the same seed see identical phases.
class PhaseSource {
 public:
  PhaseSource(const NoiseModel& noise, std::size_t n_vertices, std::size_t coin_dim, Rng& rng)
      : noise_(noise), n_(n_vertices), d_(coin_dim), rng_(rng), theta_(n_vertices, 0.0) {
    if (noise_.kind == NoiseKind::StaticPhase) draw_per_vertex();
  }

  /// Phase angle of basis index v*d + c for the current step.
  void next_step() {
    if (noise_.kind == NoiseKind::FastPhase) {
      draw_per_vertex();
    } else if (noise_.kind == NoiseKind::SlowPhase) {
      const double th = rng_.uniform(-noise_.strength, noise_.strength);
      std::fill(theta_.begin(), theta_.end(), th);
    }
  }

  double angle(std::size_t index) const { return static_cast<double>(index % d_) * theta_[index / d_]; }

 private:
  void draw_per_vertex() {
    for (double& th : theta_) th = rng_.uniform(-noise_.strength, noise_.strength);
  }

  const NoiseModel& noise_;
  std::size_t n_, d_;
  Rng& rng_;
  std::vector<double> theta_;
};

std::uint64_t trajectory_stream(const NoiseModel& noise, std::uint64_t run_seed) {
  return derive_seed(noise.seed, run_seed, 1);
}

// Born-rule measurement of a partition of basis indices; `group_of` maps an
// index to its outcome.
template <class GroupOf>
void measure(std::vector<Complex>& amps, std::size_t n_groups, GroupOf group_of, Rng& rng) {
  std::vector<double> prob(n_groups, 0.0);
  for (std::size_t i = 0; i < amps.size(); ++i) prob[group_of(i)] += std::norm(amps[i]);
  double total = 0;
  for (double p : prob) total += p;
  const double u = rng.uniform() * total;
  std::size_t pick = 0;
  double cum = 0;
  for (std::size_t g = 0; g < n_groups; ++g) {
    if (prob[g] <= 0) continue;
    pick = g;
    cum += prob[g];
    if (u < cum) break;
  }
  const double scale = 1.0 / std::sqrt(prob[pick]);
  for (std::size_t i = 0; i < amps.size(); ++i) amps[i] = group_of(i) == pick ? amps[i] * scale : Complex{};
}

void conjugate_step(const CoinedWalk& walk, Eigen::MatrixXcd& rho, std::vector<Complex>& scratch) {
  const auto n = rho.rows();
  auto apply_columns = [&](Eigen::MatrixXcd& m) {
    for (Eigen::Index j = 0; j < n; ++j) {
      walk.step(std::span<Complex>(m.col(j).data(), static_cast<std::size_t>(n)), scratch);
    }
  };
  apply_columns(rho);                // U rho
  rho = rho.adjoint().eval();        // rho U^dagger
  apply_columns(rho);                // U rho U^dagger
}

WalkState run_trajectory(const CoinedWalk& walk, const WalkState& psi0, const NoiseModel& noise, std::uint64_t steps,
                         std::uint64_t run_seed) {
  walk.check(psi0);
  WalkState psi = psi0;
  if (!noise.active()) {
    walk.evolve(psi, steps);
    return psi;
  }
  Rng rng(trajectory_stream(noise, run_seed));
  const std::size_t d = psi.coin_dim;
  PhaseSource phases(noise, psi.n_vertices, d, rng);
  std::vector<Complex> scratch;
  for (std::uint64_t t = 0; t < steps; ++t) {
    walk.step(psi.amplitudes, scratch);
    switch (noise.kind) {
      case NoiseKind::CoinMeasure:
        if (rng.bernoulli(noise.strength)) measure(psi.amplitudes, d, [d](std::size_t i) { return i % d; }, rng);
        break;
      case NoiseKind::PositionMeasure:
        if (rng.bernoulli(noise.strength))
          measure(psi.amplitudes, psi.n_vertices, [d](std::size_t i) { return i / d; }, rng);
        break;
      case NoiseKind::StaticPhase:
      case NoiseKind::FastPhase:
      case NoiseKind::SlowPhase:
        phases.next_step();
        for (std::size_t i = 0; i < psi.amplitudes.size(); ++i) {
          if (i % d) psi.amplitudes[i] *= std::polar(1.0, phases.angle(i));
        }
        break;
      case NoiseKind::None:
        break;
    }
  }
  psi.step_count += steps;
  return psi;
}

}  // namespace

const char* to_string(NoiseKind kind) noexcept {
  switch (kind) {
    case NoiseKind::None: return "none";
    case NoiseKind::CoinMeasure: return "coin_measure";
    case NoiseKind::PositionMeasure: return "position_measure";
    case NoiseKind::StaticPhase: return "static_phase";
    case NoiseKind::FastPhase: return "fast_phase";
    case NoiseKind::SlowPhase: return "slow_phase";
  }
  return "none";
}

NoiseKind noise_kind_from_string(const std::string& name) {
  for (NoiseKind k : {NoiseKind::None, NoiseKind::CoinMeasure, NoiseKind::PositionMeasure, NoiseKind::StaticPhase,
                      NoiseKind::FastPhase, NoiseKind::SlowPhase}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorKind::InvalidParameter, "unknown noise kind '" + name + "'");
}

void NoiseModel::validate() const {
  const double hi = is_phase() ? std::numbers::pi : 1.0;
  if (!(strength >= 0.0 && strength <= hi)) {
    throw Error(ErrorKind::InvalidParameter, std::string("noise strength for ") + to_string(kind) + " must lie in [0, " +
                                                 (is_phase() ? "pi" : "1") + "]");
  }
}

DensityState DensityState::pure(const WalkState& psi) {
  DensityState rho;
  rho.substrate_id = psi.substrate_id;
  rho.coin_dim = psi.coin_dim;
  rho.n_vertices = psi.n_vertices;
  rho.step_count = psi.step_count;
  Eigen::Map<const Eigen::VectorXcd> v(psi.amplitudes.data(), static_cast<Eigen::Index>(psi.amplitudes.size()));
  rho.matrix = v * v.adjoint();
  return rho;
}

double DensityState::hermiticity_defect() const { return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff(); }

double DensityState::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(matrix, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

void check_density_budget(std::size_t basis_states, std::uint64_t budget) {
  const long double need = static_cast<long double>(basis_states) * static_cast<long double>(basis_states);
  if (need > static_cast<long double>(budget)) {
    throw Error(ErrorKind::Resource, "density matrix needs " + std::to_string(basis_states) + "^2 = " +
                                         std::to_string(static_cast<unsigned long long>(need)) +
                                         " amplitudes; budget allows " + std::to_string(budget));
  }
}

DensityState evolve_density(const DensityState& rho0, const CoinOperator& coin, const Substrate& substrate,
                            const NoiseModel& noise, std::uint64_t steps, const DensityOptions& options) {
  noise.validate();
  const std::size_t n_basis = substrate.coin_slots() * substrate.n_vertices();
  check_density_budget(n_basis, options.memory_budget);
  const CoinedWalk walk(coin, substrate);
  if (rho0.substrate_id != walk.substrate_id() || rho0.matrix.rows() != static_cast<Eigen::Index>(n_basis)) {
    throw Error(ErrorKind::Dimension, "density state does not belong to this substrate/coin");
  }
  const std::size_t d = coin.dimension();
  const auto n = static_cast<Eigen::Index>(n_basis);
  std::vector<Complex> scratch;

  if (noise.active() && (noise.kind == NoiseKind::StaticPhase || noise.kind == NoiseKind::SlowPhase)) {
    if (options.disorder_runs == 0) throw Error(ErrorKind::InvalidParameter, "disorder_runs must be positive");
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t r = 0; r < options.disorder_runs; ++r) {
      Rng rng(trajectory_stream(noise, derive_seed(noise.seed, r)));
      PhaseSource phases(noise, substrate.n_vertices(), d, rng);
      Eigen::MatrixXcd rho = rho0.matrix;
      Eigen::VectorXcd phase(n);
      for (std::uint64_t t = 0; t < steps; ++t) {
        conjugate_step(walk, rho, scratch);
        phases.next_step();
        for (Eigen::Index i = 0; i < n; ++i) phase[i] = std::polar(1.0, phases.angle(static_cast<std::size_t>(i)));
        rho = phase.asDiagonal() * rho * phase.conjugate().asDiagonal();
      }
      sum += rho;
    }
    DensityState out = rho0;
    out.matrix = sum / static_cast<double>(options.disorder_runs);
    out.step_count += steps;
    return out;
  }

  // Per-entry damping factor of the Markovian channels.
  Eigen::MatrixXd factor;
  if (noise.active()) {
    factor.resize(n, n);
    const double s = noise.strength;
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto ci = static_cast<std::size_t>(i) % d, cj = static_cast<std::size_t>(j) % d;
        const auto vi = static_cast<std::size_t>(i) / d, vj = static_cast<std::size_t>(j) / d;
        double f = 1.0;
        switch (noise.kind) {
          case NoiseKind::CoinMeasure: f = ci == cj ? 1.0 : 1.0 - s; break;
          case NoiseKind::PositionMeasure: f = vi == vj ? 1.0 : 1.0 - s; break;
          case NoiseKind::FastPhase:
            f = vi == vj ? sinc((static_cast<double>(ci) - static_cast<double>(cj)) * s)
                         : sinc(static_cast<double>(ci) * s) * sinc(static_cast<double>(cj) * s);
            break;
          default: break;
        }
        factor(i, j) = f;
      }
    }
  }

  DensityState out = rho0;
  for (std::uint64_t t = 0; t < steps; ++t) {
    conjugate_step(walk, out.matrix, scratch);
    if (noise.active()) out.matrix = out.matrix.cwiseProduct(factor.cast<Complex>());
  }
  out.step_count += steps;
  return out;
}

WalkState evolve_trajectory(const WalkState& psi0, const CoinOperator& coin, const Substrate& substrate,
                            const NoiseModel& noise, std::uint64_t steps, std::uint64_t run_seed) {
  noise.validate();
  return run_trajectory(CoinedWalk(coin, substrate), psi0, noise, steps, run_seed);
}

EnsembleResult ensemble_average(const WalkState& psi0, const CoinOperator& coin, const Substrate& substrate,
                                const NoiseModel& noise, std::uint64_t steps, std::size_t runs, std::uint64_t seed,
                                std::size_t threads, std::size_t origin_vertex) {
  noise.validate();
  if (runs == 0) throw Error(ErrorKind::InvalidParameter, "ensemble needs at least one run");
  const CoinedWalk walk(coin, substrate);
  auto job = [&](std::size_t r) {
    const WalkState psi = run_trajectory(walk, psi0, noise, steps, derive_seed(seed, r));
    return position_distribution(psi, substrate, origin_vertex);
  };
  if (!noise.active()) {
    // Every run is the pure walk; evaluate it once so the mean is exact.
    EnsembleResult res = run_ensemble(1, 1, job);
    res.runs = runs;
    return res;
  }
  return run_ensemble(runs, threads, job);
}

}  // namespace qwalk
