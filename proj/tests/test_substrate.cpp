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

#include <map>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "qwalk/error.hpp"
#include "qwalk/substrate.hpp"

using namespace qwalk;

namespace {

// Symmetry, no loops or duplicates, each edge listed once per endpoint.
void check_invariants(const Substrate& s) {
  std::map<Edge, int> seen;
  for (std::size_t v = 0; v < s.n_vertices(); ++v) {
    std::set<std::size_t> neighbours;
    for (const Port& p : s.ports(v)) {
      REQUIRE(p.neighbour < s.n_vertices());
      CHECK(p.neighbour != v);
      CHECK(neighbours.insert(p.neighbour).second);
      CHECK(p.slot < s.coin_slots());
      seen[{std::min(v, p.neighbour), std::max(v, p.neighbour)}]++;
    }
  }
  CHECK(seen.size() == s.n_edges());
  for (const auto& e : s.edges()) {
    CHECK(e.first < e.second);
    CHECK(seen[e] == 2);
  }
  CHECK(s.coin_slots() >= s.max_degree());
}

std::size_t count_degree(const Substrate& s, std::size_t d) {
  std::size_t n = 0;
  for (std::size_t v = 0; v < s.n_vertices(); ++v) n += s.degree(v) == d;
  return n;
}

}  // namespace

TEST_CASE("line generator") {
  const Substrate s = Substrate::line(3, Boundary::Open);
  CHECK(s.n_vertices() == 3);
  CHECK(s.edges() == std::vector<Edge>{{0, 1}, {1, 2}});
  // port 0 left, port 1 right at the interior vertex
  REQUIRE(s.degree(1) == 2);
  CHECK(s.ports(1)[0] == Port{0, 0});
  CHECK(s.ports(1)[1] == Port{2, 1});
  check_invariants(s);

  const Substrate ring = Substrate::line(4, Boundary::Periodic);
  CHECK(ring.n_edges() == 4);
  CHECK(count_degree(ring, 2) == 4);
  CHECK(ring.ports(0)[0].neighbour == 3);
  check_invariants(ring);

  CHECK_THROWS_AS(Substrate::line(1, Boundary::Open), Error);
  try {
    Substrate::line(0, Boundary::Open);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidSize);
  }
}

TEST_CASE("line large enough for a million steps") {
  const Substrate s = Substrate::line(2'000'001, Boundary::Open);
  CHECK(s.n_vertices() == 2'000'001);
  CHECK(s.n_edges() == 2'000'000);
  CHECK(s.coordinates(1'000'000) == std::vector<std::int64_t>{1'000'000});
}

TEST_CASE("lattice generator") {
  const std::size_t d33[] = {3, 3};
  const Substrate g = Substrate::lattice(d33, Boundary::Open);
  CHECK(g.n_vertices() == 9);
  CHECK(g.degree(0) == 2);
  CHECK(g.degree(4) == 4);
  CHECK(g.coin_slots() == 4);
  check_invariants(g);
  // row-major: vertex 5 = (1, 2)
  CHECK(g.coordinates(5) == std::vector<std::int64_t>{1, 2});
  // ports ordered -axis0, +axis0, -axis1, +axis1
  const auto p = g.ports(4);
  CHECK(p[0] == Port{1, 0});
  CHECK(p[1] == Port{7, 1});
  CHECK(p[2] == Port{3, 2});
  CHECK(p[3] == Port{5, 3});

  const std::size_t big2[] = {1414, 1414};
  CHECK(Substrate::lattice(big2, Boundary::Open).n_vertices() == 1'999'396);
  const std::size_t big3[] = {125, 125, 125};
  const Substrate cube = Substrate::lattice(big3, Boundary::Open);
  CHECK(cube.n_vertices() == 1'953'125);
  CHECK(cube.degree(62 * 125 * 125 + 62 * 125 + 62) == 6);

  const std::size_t torus[] = {4, 5};
  const Substrate t = Substrate::lattice(torus, Boundary::Periodic);
  CHECK(count_degree(t, 4) == 20);
  check_invariants(t);

  CHECK_THROWS_AS(Substrate::lattice(std::span<const std::size_t>{}, Boundary::Open), Error);
  const std::size_t bad[] = {3, 1};
  CHECK_THROWS_AS(Substrate::lattice(bad, Boundary::Open), Error);
  const std::size_t four[] = {2, 2, 2, 2};
  CHECK_THROWS_AS(Substrate::lattice(four, Boundary::Open), Error);
}

TEST_CASE("line equals one-dimensional lattice") {
  for (std::size_t n : {2u, 3u, 10u, 101u}) {
    const std::size_t d[] = {n};
    CHECK(Substrate::line(n, Boundary::Open) == Substrate::lattice(d, Boundary::Open));
    CHECK(Substrate::line(n, Boundary::Periodic) == Substrate::lattice(d, Boundary::Periodic));
  }
}

TEST_CASE("adjacency graphs") {
  const std::vector<Edge> k3 = {{0, 1}, {0, 2}, {1, 2}};
  const Substrate t = Substrate::from_adjacency(k3, 3);
  CHECK(count_degree(t, 2) == 3);
  check_invariants(t);
  // ascending neighbour order
  CHECK(t.ports(1)[0].neighbour == 0);
  CHECK(t.ports(1)[1].neighbour == 2);

  const Substrate empty = Substrate::from_adjacency(std::vector<Edge>{}, 5);
  CHECK(empty.n_vertices() == 5);
  CHECK(empty.n_edges() == 0);
  CHECK(count_degree(empty, 0) == 5);

  const std::vector<Edge> path = {{1, 2}, {1, 0}};
  CHECK(Substrate::from_adjacency(path, 3).same_graph(Substrate::line(3, Boundary::Open)));

  auto kind_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;
  };
  const std::vector<Edge> loop = {{1, 1}};
  const std::vector<Edge> dup = {{0, 1}, {1, 0}};
  const std::vector<Edge> dangling = {{0, 7}};
  CHECK(kind_of([&] { Substrate::from_adjacency(loop, 3); }) == ErrorKind::InvalidEdge);
  CHECK(kind_of([&] { Substrate::from_adjacency(dup, 3); }) == ErrorKind::InvalidEdge);
  CHECK(kind_of([&] { Substrate::from_adjacency(dangling, 3); }) == ErrorKind::OutOfRange);
}

TEST_CASE("adjacency file round trip") {
  const std::vector<Edge> edges = {{3, 1}, {0, 2}, {0, 1}, {2, 3}};
  const Substrate s = Substrate::from_adjacency(edges, 5);
  std::ostringstream os;
  write_adjacency(os, s);
  CHECK(os.str() == "5\n0 1\n0 2\n1 3\n2 3\n");
  std::istringstream in(os.str());
  CHECK(read_adjacency(in) == s);

  oracle::TempDir dir("adj");
  write_adjacency(dir / "g.txt", s);
  CHECK(read_adjacency(dir / "g.txt") == s);
  CHECK_THROWS_AS(read_adjacency(dir / "missing.txt"), Error);
  std::istringstream bad("3\n0 x\n");
  CHECK_THROWS_AS(read_adjacency(bad), Error);
}

TEST_CASE("percolation keeps all or nothing at the extremes") {
  const std::size_t d[] = {6, 7};
  const Substrate base = Substrate::lattice(d, Boundary::Periodic);
  for (std::uint64_t seed : {0ull, 1ull, 99ull, 0xFFFFFFFFFFFFFFFFull}) {
    for (auto mode : {PercolationMode::Bond, PercolationMode::Site}) {
      const Substrate all = percolate(base, {mode, 1.0, seed});
      CHECK(all.same_graph(base));
      CHECK(percolate(all, {mode, 1.0, seed + 1}).same_graph(base));
    }
    const Substrate none = percolate(base, {PercolationMode::Bond, 0.0, seed});
    CHECK(none.n_edges() == 0);
    CHECK(none.n_vertices() == base.n_vertices());
  }
}

TEST_CASE("bond percolation survival fraction") {
  const Substrate line = Substrate::line(10'000, Boundary::Open);
  const Substrate half = percolate(line, {PercolationMode::Bond, 0.5, 2024});
  const double n = static_cast<double>(line.n_edges());
  const double sd = std::sqrt(n * 0.25);
  CHECK(std::abs(static_cast<double>(half.n_edges()) - 0.5 * n) < 4 * sd);
  check_invariants(half);
}

TEST_CASE("site percolation keeps removed vertices isolated") {
  const std::size_t d[] = {8, 8};
  const Substrate base = Substrate::lattice(d, Boundary::Open);
  const Substrate s = percolate(base, {PercolationMode::Site, 0.6, 5});
  CHECK(s.n_vertices() == base.n_vertices());
  CHECK(s.dims() == base.dims());
  check_invariants(s);
  for (const auto& e : s.edges()) {
    CHECK(std::find(base.edges().begin(), base.edges().end(), e) != base.edges().end());
  }
  // A vertex with a surviving edge survived, so a base edge joining two such
  // vertices must itself survive.
  std::vector<bool> alive(s.n_vertices(), false);
  for (const auto& e : s.edges()) alive[e.first] = alive[e.second] = true;
  for (const auto& e : base.edges()) {
    if (alive[e.first] && alive[e.second]) {
      CHECK(std::find(s.edges().begin(), s.edges().end(), e) != s.edges().end());
    }
  }
}

TEST_CASE("percolation is deterministic and pinned") {
  const Substrate base = Substrate::line(64, Boundary::Periodic);
  const PercolationSpec spec{PercolationMode::Bond, 0.7, 12345};
  const Substrate a = percolate(base, spec);
  const Substrate b = percolate(base, spec);
  CHECK(a == b);
  CHECK(a.fingerprint() == b.fingerprint());
  CHECK_FALSE(percolate(base, {PercolationMode::Bond, 0.7, 12346}) == a);
  // Fixed output for this seed; guards against platform-dependent RNG paths.
  std::ostringstream os;
  write_adjacency(os, percolate(Substrate::line(12, Boundary::Open), {PercolationMode::Bond, 0.5, 7}));
  CHECK(os.str() == "12\n2 3\n4 5\n5 6\n9 10\n10 11\n");
}

TEST_CASE("percolated port order preserved") {
  const std::vector<Edge> edges = {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}};
  const Substrate star = Substrate::from_adjacency(edges, 5);
  const Substrate p = percolate(star, {PercolationMode::Bond, 0.6, 3});
  check_invariants(p);
  for (std::size_t v = 0; v < p.n_vertices(); ++v) {
    auto ports = p.ports(v);
    for (std::size_t k = 0; k < ports.size(); ++k) {
      CHECK(ports[k].slot == k);
      if (k > 0) CHECK(ports[k - 1].neighbour < ports[k].neighbour);
    }
  }
}
