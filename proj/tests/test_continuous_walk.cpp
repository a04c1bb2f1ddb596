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
#include "qwalk/continuous_walk.hpp"
#include "qwalk/error.hpp"
#include "qwalk/rng.hpp"

using namespace qwalk;
using doctest::Approx;

namespace {

using EdgeList = std::vector<std::pair<std::size_t, std::size_t>>;

struct Graph {
  std::string name;
  std::size_t n;
  EdgeList edges;
};

// Small graphs with hand-listed edges, so the oracle matrix never comes
// from the library's own substrate code.
std::vector<Graph> small_graphs() {
  std::vector<Graph> g;
  g.push_back({"edge", 2, {{0, 1}}});
  for (std::size_t n : {3u, 8u, 17u, 64u}) {
    EdgeList path, ring;
    for (std::size_t i = 0; i + 1 < n; ++i) path.push_back({i, i + 1});
    ring = path;
    ring.push_back({0, n - 1});
    g.push_back({"path" + std::to_string(n), n, path});
    g.push_back({"cycle" + std::to_string(n), n, ring});
  }
  for (std::size_t n : {3u, 6u, 12u}) {
    EdgeList k;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) k.push_back({i, j});
    g.push_back({"complete" + std::to_string(n), n, k});
  }
  EdgeList grid;
  for (std::size_t r = 0; r < 8; ++r)
    for (std::size_t c = 0; c < 8; ++c) {
      if (r + 1 < 8) grid.push_back({r * 8 + c, (r + 1) * 8 + c});
      if (c + 1 < 8) grid.push_back({r * 8 + c, r * 8 + c + 1});
    }
  g.push_back({"grid8x8", 64, grid});
  Rng rng(31);
  for (std::size_t n : {10u, 33u, 50u, 64u}) {
    EdgeList er;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (rng.bernoulli(0.15)) er.push_back({i, j});
    g.push_back({"random" + std::to_string(n), n, er});
  }
  g.push_back({"isolated", 4, {}});
  return g;
}

Substrate to_substrate(const Graph& g) {
  std::vector<Edge> e(g.edges.begin(), g.edges.end());
  return Substrate::from_adjacency(e, g.n);
}

ContinuousState random_state(const Substrate& s, std::uint64_t seed) {
  Rng rng(seed);
  ContinuousState psi = vertex_state(s, 0);
  double n = 0;
  for (auto& a : psi.amplitudes) {
    a = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    n += std::norm(a);
  }
  for (auto& a : psi.amplitudes) a /= std::sqrt(n);
  return psi;
}

double max_diff(const ContinuousState& a, const Eigen::VectorXcd& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.amplitudes.size(); ++i) m = std::max(m, std::abs(a.amplitudes[i] - b[static_cast<Eigen::Index>(i)]));
  return m;
}

Eigen::VectorXcd as_vector(const ContinuousState& s) {
  return Eigen::Map<const Eigen::VectorXcd>(s.amplitudes.data(), static_cast<Eigen::Index>(s.amplitudes.size()));
}

}  // namespace

TEST_CASE("hamiltonian entries") {
  const Hamiltonian h3 = build_hamiltonian(Substrate::line(3, Boundary::Open), 1.0);
  const Eigen::MatrixXd d3 = Eigen::MatrixXd(h3.matrix());
  Eigen::MatrixXd want(3, 3);
  want << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  CHECK(d3 == want);

  const Hamiltonian h2 = build_hamiltonian(Substrate::line(2, Boundary::Open), 0.7);
  const Eigen::MatrixXd d2 = Eigen::MatrixXd(h2.matrix());
  CHECK(d2(0, 1) == 0.7);
  CHECK(d2(1, 0) == 0.7);
  CHECK(d2(0, 0) == 0.0);

  const std::vector<Edge> k3 = {{0, 1}, {0, 2}, {1, 2}};
  const Eigen::MatrixXd dk = Eigen::MatrixXd(build_hamiltonian(Substrate::from_adjacency(k3, 3), 2.0).matrix());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(dk(i, j) == (i == j ? 0.0 : 2.0));

  CHECK_THROWS_AS(build_hamiltonian(Substrate::line(3, Boundary::Open), 0.0), Error);
  CHECK_THROWS_AS(build_hamiltonian(Substrate::line(3, Boundary::Open), -1.0), Error);
}

TEST_CASE("apply agrees with the sparse matrix") {
  const std::size_t d[] = {5, 6};
  const Substrate s = Substrate::lattice(d, Boundary::Periodic);
  const Hamiltonian h = build_hamiltonian(s, 1.3);
  const ContinuousState psi = random_state(s, 4);
  std::vector<Complex> out(psi.amplitudes.size());
  h.apply(psi.amplitudes, out);
  const Eigen::VectorXcd ref = h.matrix().cast<Complex>() * as_vector(psi);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(std::abs(out[i] - ref[static_cast<Eigen::Index>(i)]) < 1e-14);
}

TEST_CASE("t=0 leaves the state alone") {
  const Substrate s = Substrate::line(9, Boundary::Open);
  const ContinuousState psi = random_state(s, 1);
  const ContinuousState out = evolve_ct(psi, build_hamiltonian(s), 0.0);
  CHECK(out.amplitudes == psi.amplitudes);
  CHECK_THROWS_AS(evolve_ct(psi, build_hamiltonian(s), -1.0), Error);
}

TEST_CASE("two-site transfer") {
  for (double gamma : {0.5, 1.0, 3.0}) {
    const Substrate s = Substrate::line(2, Boundary::Open);
    for (ExpMethod m : {ExpMethod::Dense, ExpMethod::Krylov}) {
      PropagationOptions o;
      o.method = m;
      const ContinuousState out = evolve_ct(vertex_state(s, 0), build_hamiltonian(s, gamma), std::numbers::pi / (2 * gamma), o);
      CHECK(std::norm(out.amplitudes[1]) == Approx(1.0).epsilon(1e-8));
      CHECK(std::norm(out.amplitudes[0]) < 1e-8);
      CHECK(out.time == Approx(std::numbers::pi / (2 * gamma)));
    }
  }
}

TEST_CASE("dense and Krylov routes both match the eigen-decomposition reference") {
  for (const Graph& g : small_graphs()) {
    CAPTURE(g.name);
    const Substrate s = to_substrate(g);
    const double gamma = 0.8;
    const Eigen::MatrixXd a = oracle::adjacency_matrix(g.n, g.edges, gamma);
    const Hamiltonian h = build_hamiltonian(s, gamma);
    const ContinuousState psi = random_state(s, g.n);
    for (double t : {0.1, 1.0, 7.3, 40.0}) {
      const Eigen::VectorXcd ref = oracle::eig_propagate(a, t, as_vector(psi));
      for (ExpMethod m : {ExpMethod::Dense, ExpMethod::Krylov}) {
        PropagationOptions o;
        o.method = m;
        const ContinuousState out = evolve_ct(psi, h, t, o);
        CHECK(max_diff(out, ref) < 1e-8);
        CHECK(std::abs(out.norm_squared() - 1.0) < 1e-9);
      }
    }
  }
}

TEST_CASE("Krylov on a long line matches the reference") {
  const std::size_t n = 1500;
  EdgeList path;
  for (std::size_t i = 0; i + 1 < n; ++i) path.push_back({i, i + 1});
  const Substrate s = Substrate::line(n, Boundary::Open);
  const ContinuousState psi = vertex_state(s, n / 2);
  PropagationReport rep;
  const ContinuousState out = evolve_ct(psi, build_hamiltonian(s), 150.0, {}, &rep);
  CHECK(rep.method == ExpMethod::Krylov);
  CHECK(rep.substeps > 1);
  const Eigen::VectorXcd ref = oracle::eig_propagate(oracle::adjacency_matrix(n, path), 150.0, as_vector(psi));
  CHECK(max_diff(out, ref) < 1e-8);
}

TEST_CASE("composition") {
  const std::size_t d[] = {6, 6};
  const Substrate s = Substrate::lattice(d, Boundary::Open);
  const Hamiltonian h = build_hamiltonian(s, 1.0);
  const ContinuousState psi = random_state(s, 9);
  const ContinuousState ab = evolve_ct(evolve_ct(psi, h, 1.7), h, 2.9);
  const ContinuousState whole = evolve_ct(psi, h, 4.6);
  CHECK(max_diff(ab, as_vector(whole)) < 1e-8);
  CHECK(ab.time == Approx(4.6));
}

TEST_CASE("energy conservation") {
  const Substrate s = Substrate::line(1200, Boundary::Periodic);
  const Hamiltonian h = build_hamiltonian(s, 1.0);
  ContinuousState psi = random_state(s, 2);
  const double e0 = energy(psi, h);
  for (int k = 0; k < 5; ++k) {
    psi = evolve_ct(psi, h, 3.0);
    CHECK(std::abs(energy(psi, h) - e0) < 1e-8);
  }
}

TEST_CASE("linear spreading on a line") {
  const Substrate s = Substrate::line(401, Boundary::Open);
  const Hamiltonian h = build_hamiltonian(s, 1.0);
  const ContinuousState psi = vertex_state(s, 200);
  const double s50 = moments(position_distribution(evolve_ct(psi, h, 50.0), s, 200)).sigma;
  const double s100 = moments(position_distribution(evolve_ct(psi, h, 100.0), s, 200)).sigma;
  CHECK(s100 / s50 == Approx(2.0).epsilon(0.025));
}

TEST_CASE("boundary leakage report") {
  const Substrate s = Substrate::line(301, Boundary::Open);
  const Hamiltonian h = build_hamiltonian(s, 1.0);
  CHECK(boundary_probability(evolve_ct(vertex_state(s, 150), h, 20.0), s) < 1e-12);
  CHECK(boundary_probability(evolve_ct(vertex_state(s, 150), h, 90.0), s) > 1e-6);
}

TEST_CASE("Krylov failure is reported") {
  const Substrate s = Substrate::line(2000, Boundary::Open);
  PropagationOptions o;
  o.method = ExpMethod::Krylov;
  o.max_substeps = 2;
  o.krylov_dim = 4;
  try {
    evolve_ct(vertex_state(s, 1000), build_hamiltonian(s), 500.0, o);
    FAIL("expected a numerical failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NumericalFailure);
    CHECK(std::string(e.what()).find("error estimate") != std::string::npos);
  }
}

TEST_CASE("state from another substrate is rejected") {
  const Substrate a = Substrate::line(5, Boundary::Open);
  const Substrate b = Substrate::line(6, Boundary::Open);
  CHECK_THROWS_AS(evolve_ct(vertex_state(a, 0), build_hamiltonian(b), 1.0), Error);
}
