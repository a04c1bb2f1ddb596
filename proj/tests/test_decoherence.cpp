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

#include <doctest.h>

#include <numbers>

#include "oracles.hpp"
#include "qwalk/analysis.hpp"
#include "qwalk/decoherence.hpp"
#include "qwalk/error.hpp"
#include "qwalk/rng.hpp"

using namespace qwalk;
using doctest::Approx;

namespace {

const double kPi = std::numbers::pi;

WalkState symmetric_start(const Substrate& s, std::size_t v) { return initial_state({0.5, kPi / 2, v}, s); }

NoiseModel noise(NoiseKind k, double s, std::uint64_t seed = 11) { return {k, s, seed}; }

// Unitary of one walk step, assembled column by column from basis states.
Eigen::MatrixXcd step_matrix(const CoinOperator& c, const Substrate& s) {
  const CoinedWalk walk(c, s);
  const auto n = static_cast<Eigen::Index>(walk.dimension());
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
  std::vector<Complex> scratch;
  for (Eigen::Index j = 0; j < n; ++j) {
    std::vector<Complex> e(static_cast<std::size_t>(n), 0.0);
    e[static_cast<std::size_t>(j)] = 1.0;
    walk.step(e, scratch);
    for (Eigen::Index i = 0; i < n; ++i) u(i, j) = e[static_cast<std::size_t>(i)];
  }
  return u;
}

}  // namespace

TEST_CASE("noise strength ranges") {
  CHECK_NOTHROW(noise(NoiseKind::CoinMeasure, 1.0).validate());
  CHECK_THROWS_AS(noise(NoiseKind::CoinMeasure, 1.5).validate(), Error);
  CHECK_THROWS_AS(noise(NoiseKind::PositionMeasure, -0.1).validate(), Error);
  CHECK_NOTHROW(noise(NoiseKind::StaticPhase, kPi).validate());
  CHECK_THROWS_AS(noise(NoiseKind::FastPhase, 3.2).validate(), Error);
  CHECK(noise_kind_from_string("slow_phase") == NoiseKind::SlowPhase);
  CHECK_THROWS_AS(noise_kind_from_string("amplitude_damping"), Error);
}

TEST_CASE("zero strength density equals the pure walk") {
  const Substrate line = Substrate::line(21, Boundary::Open);
  const WalkState psi0 = symmetric_start(line, 10);
  const DensityState pure = DensityState::pure(evolve(psi0, hadamard_coin(), line, 8));
  for (NoiseKind k : {NoiseKind::None, NoiseKind::CoinMeasure, NoiseKind::PositionMeasure, NoiseKind::StaticPhase,
                      NoiseKind::FastPhase, NoiseKind::SlowPhase}) {
    CAPTURE(to_string(k));
    const DensityState rho = evolve_density(DensityState::pure(psi0), hadamard_coin(), line, noise(k, 0.0), 8);
    CHECK((rho.matrix - pure.matrix).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(rho.step_count == 8);
  }
}

TEST_CASE("full coin dephasing gives the classical binomial") {
  const Substrate line = Substrate::line(41, Boundary::Open);
  const DensityState rho = evolve_density(DensityState::pure(symmetric_start(line, 20)), hadamard_coin(), line,
                                          noise(NoiseKind::CoinMeasure, 1.0), 20);
  const Distribution d = position_distribution(rho, line, 20);
  const auto ref = oracle::pascal_binomial(20);
  REQUIRE(d.size() == ref.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(d.labels[i][0] == static_cast<std::int64_t>(i) - 20);
    CHECK(std::abs(d.probabilities[i] - ref[i]) < 1e-8);
  }
}

TEST_CASE("density invariants after every step") {
  const Substrate line = Substrate::line(9, Boundary::Open);
  const std::vector<NoiseModel> models = {
      noise(NoiseKind::CoinMeasure, 0.4), noise(NoiseKind::PositionMeasure, 0.7), noise(NoiseKind::StaticPhase, 2.0),
      noise(NoiseKind::FastPhase, 1.1),   noise(NoiseKind::SlowPhase, kPi),        noise(NoiseKind::None, 0.0)};
  DensityOptions opts;
  opts.disorder_runs = 20;
  for (const auto& m : models) {
    CAPTURE(to_string(m.kind));
    DensityState rho = DensityState::pure(initial_state({0.3, 0.4, 4}, line));
    for (int t = 0; t < 12; ++t) {
      rho = evolve_density(rho, hadamard_coin(), line, m, 1, opts);
      CHECK(std::abs(rho.trace() - 1.0) < 1e-10);
      CHECK(rho.hermiticity_defect() < 1e-10);
      CHECK(rho.min_eigenvalue() > -1e-9);
    }
  }
}

TEST_CASE("position dephasing removes inter-site coherence") {
  const Substrate line = Substrate::line(11, Boundary::Open);
  const DensityState rho = evolve_density(DensityState::pure(symmetric_start(line, 5)), hadamard_coin(), line,
                                          noise(NoiseKind::PositionMeasure, 1.0), 4);
  for (Eigen::Index i = 0; i < rho.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < rho.matrix.cols(); ++j)
      if (i / 2 != j / 2) CHECK(std::abs(rho.matrix(i, j)) == 0.0);
}

TEST_CASE("fast phase channel matches direct quadrature") {
  // Two sites: average the phase conjugation over a fine midpoint grid.
  const Substrate s = Substrate::line(2, Boundary::Open);
  const double strength = 2.2;
  const Eigen::MatrixXcd u = step_matrix(hadamard_coin(), s);
  const int grid = 400;
  Eigen::MatrixXcd rho = DensityState::pure(initial_state({0.2, 0.9, 0}, s)).matrix;
  for (int t = 0; t < 3; ++t) {
    rho = u * rho * u.adjoint();
    Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(4, 4);
    for (int a = 0; a < grid; ++a) {
      for (int b = 0; b < grid; ++b) {
        const double th0 = -strength + (a + 0.5) * 2 * strength / grid;
        const double th1 = -strength + (b + 0.5) * 2 * strength / grid;
        Eigen::VectorXcd p(4);
        p << 1.0, std::polar(1.0, th0), 1.0, std::polar(1.0, th1);  // basis (c=-1,v0),(c=+1,v0),...
        avg += p.asDiagonal() * rho * p.conjugate().asDiagonal();
      }
    }
    rho = avg / double(grid * grid);
  }
  const DensityState got = evolve_density(DensityState::pure(initial_state({0.2, 0.9, 0}, s)), hadamard_coin(), s,
                                          noise(NoiseKind::FastPhase, strength), 3);
  CHECK((got.matrix - rho).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("disorder-averaged density equals the trajectory ensemble with the same seeds") {
  const Substrate line = Substrate::line(15, Boundary::Open);
  const WalkState psi0 = symmetric_start(line, 7);
  for (NoiseKind k : {NoiseKind::StaticPhase, NoiseKind::SlowPhase}) {
    const NoiseModel m = noise(k, 1.7, 2024);
    DensityOptions opts;
    opts.disorder_runs = 30;
    const Distribution dens = position_distribution(evolve_density(DensityState::pure(psi0), hadamard_coin(), line, m, 9, opts), line, 7);
    const EnsembleResult ens = ensemble_average(psi0, hadamard_coin(), line, m, 9, 30, m.seed, 1, 7);
    CHECK(total_variation(dens, ens.mean) < 1e-12);
  }
}

TEST_CASE("trajectory with zero strength is the pure walk, bit for bit") {
  const Substrate line = Substrate::line(61, Boundary::Open);
  const WalkState psi0 = symmetric_start(line, 30);
  const WalkState pure = evolve(psi0, hadamard_coin(), line, 25);
  for (NoiseKind k : {NoiseKind::CoinMeasure, NoiseKind::StaticPhase, NoiseKind::FastPhase, NoiseKind::None}) {
    const WalkState w = evolve_trajectory(psi0, hadamard_coin(), line, noise(k, 0.0), 25, 99);
    CHECK(w.amplitudes == pure.amplitudes);
  }
}

TEST_CASE("trajectories are deterministic and seed dependent") {
  const Substrate line = Substrate::line(61, Boundary::Open);
  const WalkState psi0 = symmetric_start(line, 30);
  for (NoiseKind k : {NoiseKind::CoinMeasure, NoiseKind::PositionMeasure, NoiseKind::StaticPhase, NoiseKind::FastPhase,
                      NoiseKind::SlowPhase}) {
    const NoiseModel m = noise(k, k == NoiseKind::CoinMeasure || k == NoiseKind::PositionMeasure ? 0.5 : 1.0);
    const WalkState a = evolve_trajectory(psi0, hadamard_coin(), line, m, 25, 5);
    const WalkState b = evolve_trajectory(psi0, hadamard_coin(), line, m, 25, 5);
    const WalkState c = evolve_trajectory(psi0, hadamard_coin(), line, m, 25, 6);
    CHECK(a.amplitudes == b.amplitudes);
    CHECK(a.amplitudes != c.amplitudes);
    CHECK(std::abs(a.norm_squared() - 1.0) < 1e-10);
  }
}

TEST_CASE("unravelling converges to the density matrix") {
  const Substrate line = Substrate::line(9, Boundary::Open);
  const WalkState psi0 = symmetric_start(line, 4);
  const std::size_t runs = 10'000;
  for (double s : {0.3, 1.0}) {
    for (std::uint64_t steps : {3u, 6u}) {
      CAPTURE(s);
      CAPTURE(steps);
      const NoiseModel m = noise(NoiseKind::CoinMeasure, s, 77);
      const Distribution exact =
          position_distribution(evolve_density(DensityState::pure(psi0), hadamard_coin(), line, m, steps), line, 4);
      std::vector<double> sum(exact.size(), 0.0), sum2(exact.size(), 0.0);
      for (std::size_t r = 0; r < runs; ++r) {
        const Distribution d =
            position_distribution(evolve_trajectory(psi0, hadamard_coin(), line, m, steps, derive_seed(123, r)), line, 4);
        for (std::size_t i = 0; i < d.size(); ++i) {
          sum[i] += d.probabilities[i];
          sum2[i] += d.probabilities[i] * d.probabilities[i];
        }
      }
      for (std::size_t i = 0; i < exact.size(); ++i) {
        const double mean = sum[i] / runs;
        const double var = std::max(0.0, sum2[i] / runs - mean * mean);
        const double se = std::sqrt(var / (runs - 1));
        CHECK(std::abs(mean - exact.probabilities[i]) <= 3 * se + 1e-12);
      }
    }
  }
}

TEST_CASE("ensemble without noise equals the pure walk exactly") {
  const Substrate line = Substrate::line(41, Boundary::Open);
  const WalkState psi0 = symmetric_start(line, 20);
  const EnsembleResult e = ensemble_average(psi0, hadamard_coin(), line, {}, 20, 50, 3, 1, 20);
  const Distribution pure = position_distribution(evolve(psi0, hadamard_coin(), line, 20), line, 20);
  CHECK(e.mean.probabilities == pure.probabilities);
  CHECK(e.runs == 50);
}

TEST_CASE("ensemble result does not depend on thread count") {
  const Substrate line = Substrate::line(81, Boundary::Open);
  const WalkState psi0 = symmetric_start(line, 40);
  const NoiseModel m = noise(NoiseKind::FastPhase, 1.0, 8);
  const EnsembleResult one = ensemble_average(psi0, hadamard_coin(), line, m, 40, 64, 21, 1, 40);
  const EnsembleResult four = ensemble_average(psi0, hadamard_coin(), line, m, 40, 64, 21, 4, 40);
  CHECK(one.mean.probabilities == four.mean.probabilities);
  CHECK(one.sigma == four.sigma);
  CHECK(one.sigma_stderr == four.sigma_stderr);
  CHECK(one.ipr_mean == four.ipr_mean);
}

TEST_CASE("strong fast phase noise restores diffusive spreading") {
  const Substrate line = Substrate::line(801, Boundary::Open);
  const WalkState psi0 = symmetric_start(line, 400);
  const NoiseModel m = noise(NoiseKind::FastPhase, kPi, 41);
  const double s100 = ensemble_average(psi0, hadamard_coin(), line, m, 100, 1000, 5, 1, 400).sigma;
  const double s400 = ensemble_average(psi0, hadamard_coin(), line, m, 400, 1000, 5, 1, 400).sigma;
  MESSAGE("sigma(400)/sigma(100) = ", s400 / s100);
  CHECK(s400 / s100 >= 1.8);
  CHECK(s400 / s100 <= 2.3);
}

TEST_CASE("density memory budget") {
  const Substrate line = Substrate::line(5000, Boundary::Open);
  try {
    evolve_density(DensityState::pure(symmetric_start(line, 2500)), hadamard_coin(), line,
                   noise(NoiseKind::CoinMeasure, 0.5), 1);
    FAIL("expected a resource error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Resource);
    CHECK(std::string(e.what()).find("10000^2") != std::string::npos);
  }
}
