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

#ifndef QWALK_SUBSTRATE_HPP
#define QWALK_SUBSTRATE_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qwalk {

enum class Boundary { Open, Periodic };

enum class PercolationMode { Bond, Site };

struct PercolationSpec {
  PercolationMode mode = PercolationMode::Bond;
  double p = 1.0;
  std::uint64_t seed = 0;
};

/// One entry of a vertex's edge ordering. `slot` is the coin index that
/// drives a walker through this port: the direction slot (-dim0, +dim0,
/// -dim1, ...) on lattice-built substrates, the port index itself otherwise.
struct Port {
  std::size_t neighbour;
  std::size_t slot;

  bool operator==(const Port&) const = default;
};

using Edge = std::pair<std::size_t, std::size_t>;

/// Undirected simple graph with a fixed port numbering at every vertex.
/// Immutable after construction.
class Substrate {
 public:
  /// Path graph (open) or cycle (periodic). Port 0 is the left neighbour and
  /// port 1 the right neighbour at every interior vertex.
  static Substrate line(std::size_t n_sites, Boundary boundary);

  /// Cartesian-product lattice with 1 to 3 axes, vertices indexed row-major.
  static Substrate lattice(std::span<const std::size_t> dims, Boundary boundary);

  /// Arbitrary graph; ports ordered by ascending neighbour index.
  static Substrate from_adjacency(std::span<const Edge> edges, std::size_t n_vertices);

  std::size_t n_vertices() const noexcept { return offsets_.size() - 1; }
  std::size_t n_edges() const noexcept { return edges_.size(); }

  /// Edges as (u, v) with u < v, sorted lexicographically.
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::span<const Port> ports(std::size_t vertex) const;
  std::size_t degree(std::size_t vertex) const { return ports(vertex).size(); }
  std::size_t max_degree() const noexcept { return max_degree_; }

  /// Coin dimension a coined walk on this substrate must use.
  std::size_t coin_slots() const noexcept { return coin_slots_; }

  /// True when slots are lattice directions (coin-preserving shift); false
  /// for arbitrary graphs (flip-flop shift).
  bool directional() const noexcept { return !dims_.empty(); }

  Boundary boundary() const noexcept { return boundary_; }

  /// Lattice extents; empty for graphs without coordinates.
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }

  /// Row-major lattice coordinates of `vertex`; empty for plain graphs.
  std::vector<std::int64_t> coordinates(std::size_t vertex) const;

  const std::string& provenance() const noexcept { return provenance_; }

  /// Hash of the structure (vertices, ports, slots); used to tie states to
  /// the substrate they were built on.
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }

  /// Structural equality: same vertices, edge orderings and slots.
  /// Provenance is ignored.
  bool operator==(const Substrate& other) const;

  /// Same vertex count, edges and neighbour order at every vertex; slots and
  /// lattice metadata are ignored.
  bool same_graph(const Substrate& other) const;

 private:
  friend Substrate percolate(const Substrate& base, const PercolationSpec& spec);

  Substrate() = default;
  void finalize();

  std::vector<std::size_t> offsets_{0};
  std::vector<Port> ports_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> dims_;
  std::size_t coin_slots_ = 0;
  std::size_t max_degree_ = 0;
  Boundary boundary_ = Boundary::Open;
  std::string provenance_;
  std::uint64_t fingerprint_ = 0;
};

/// Bond mode keeps each edge independently with probability p; site mode
/// keeps each vertex with probability p and removed vertices stay in place
/// as isolated vertices. Draws use Rng(spec.seed): one uniform per edge in
/// sorted edge order (bond) or per vertex in index order (site).
Substrate percolate(const Substrate& base, const PercolationSpec& spec);

/// Plain-text adjacency format: first line `n_vertices`, then one `u v` line
/// per edge (0-based, u < v, sorted).
void write_adjacency(std::ostream& out, const Substrate& substrate);
void write_adjacency(const std::filesystem::path& path, const Substrate& substrate);
Substrate read_adjacency(std::istream& in);
Substrate read_adjacency(const std::filesystem::path& path);

}  // namespace qwalk

#endif  // QWALK_SUBSTRATE_HPP
