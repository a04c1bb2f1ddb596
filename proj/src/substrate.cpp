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

#include "qwalk/substrate.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "qwalk/error.hpp"
#include "qwalk/rng.hpp"

namespace qwalk {
namespace {

std::string join_dims(std::span<const std::size_t> dims) {
  std::string s = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(dims[i]);
  }
  return s + "]";
}

const char* boundary_name(Boundary b) { return b == Boundary::Open ? "open" : "periodic"; }

// FNV-1a over 64-bit words.
struct Fnv {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  void add(std::uint64_t w) {
    for (int i = 0; i < 8; ++i) {
      h ^= (w >> (8 * i)) & 0xffu;
      h *= 0x100000001b3ULL;
    }
  }
};

}  // namespace

Substrate Substrate::line(std::size_t n_sites, Boundary boundary) {
  if (n_sites < 2) {
    throw Error(ErrorKind::InvalidSize, "line needs at least 2 sites, got " + std::to_string(n_sites));
  }
  const std::size_t dims[] = {n_sites};
  return lattice(dims, boundary);
}

Substrate Substrate::lattice(std::span<const std::size_t> dims, Boundary boundary) {
  if (dims.empty() || dims.size() > 3) {
    throw Error(ErrorKind::InvalidSize, "lattice needs 1 to 3 axes, got " + std::to_string(dims.size()));
  }
  std::size_t n = 1;
  for (std::size_t d : dims) {
    if (d < 2) throw Error(ErrorKind::InvalidSize, "lattice axis length must be >= 2, got " + std::to_string(d));
    n *= d;
  }

  // Row-major strides.
  std::vector<std::size_t> stride(dims.size(), 1);
  for (std::size_t a = dims.size(); a-- > 1;) stride[a - 1] = stride[a] * dims[a];

  Substrate s;
  s.dims_.assign(dims.begin(), dims.end());
  s.boundary_ = boundary;
  s.coin_slots_ = 2 * dims.size();
  s.offsets_.reserve(n + 1);
  s.ports_.reserve(n * s.coin_slots_);

  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t a = 0; a < dims.size(); ++a) {
      const std::size_t len = dims[a];
      const std::size_t x = (v / stride[a]) % len;
      // A periodic axis of length 2 would duplicate the existing edge.
      const bool wrap = boundary == Boundary::Periodic && len > 2;
      if (x > 0) {
        s.ports_.push_back({v - stride[a], 2 * a});
      } else if (wrap) {
        s.ports_.push_back({v + (len - 1) * stride[a], 2 * a});
      }
      if (x + 1 < len) {
        s.ports_.push_back({v + stride[a], 2 * a + 1});
      } else if (wrap) {
        s.ports_.push_back({v - (len - 1) * stride[a], 2 * a + 1});
      }
    }
    s.offsets_.push_back(s.ports_.size());
  }
  s.provenance_ = (dims.size() == 1 ? "line(n=" + std::to_string(dims[0])
                                    : "lattice(dims=" + join_dims(dims)) +
                  ",boundary=" + boundary_name(boundary) + ")";
  s.finalize();
  return s;
}

Substrate Substrate::from_adjacency(std::span<const Edge> edges, std::size_t n_vertices) {
  if (n_vertices == 0) throw Error(ErrorKind::InvalidSize, "graph needs at least one vertex");
  std::vector<Edge> norm;
  norm.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u >= n_vertices || v >= n_vertices) {
      throw Error(ErrorKind::OutOfRange, "edge (" + std::to_string(u) + "," + std::to_string(v) +
                                             ") references a vertex >= " + std::to_string(n_vertices));
    }
    if (u == v) throw Error(ErrorKind::InvalidEdge, "self-loop at vertex " + std::to_string(u));
    norm.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(norm.begin(), norm.end());
  if (auto dup = std::adjacent_find(norm.begin(), norm.end()); dup != norm.end()) {
    throw Error(ErrorKind::InvalidEdge, "duplicate edge (" + std::to_string(dup->first) + "," +
                                            std::to_string(dup->second) + ")");
  }

  std::vector<std::vector<std::size_t>> nbrs(n_vertices);
  for (auto [u, v] : norm) {
    nbrs[u].push_back(v);
    nbrs[v].push_back(u);
  }
  Substrate s;
  for (auto& list : nbrs) {
    std::sort(list.begin(), list.end());
    for (std::size_t k = 0; k < list.size(); ++k) s.ports_.push_back({list[k], k});
    s.offsets_.push_back(s.ports_.size());
  }
  s.provenance_ = "adjacency(n=" + std::to_string(n_vertices) + ",edges=" + std::to_string(norm.size()) + ")";
  s.finalize();
  s.coin_slots_ = std::max<std::size_t>(s.max_degree_, 1);
  s.finalize();
  return s;
}

void Substrate::finalize() {
  edges_.clear();
  max_degree_ = 0;
  const std::size_t n = n_vertices();
  for (std::size_t v = 0; v < n; ++v) {
    auto p = ports(v);
    max_degree_ = std::max(max_degree_, p.size());
    for (const Port& port : p) {
      if (v < port.neighbour) edges_.emplace_back(v, port.neighbour);
    }
  }
  std::sort(edges_.begin(), edges_.end());

  Fnv f;
  f.add(n);
  f.add(coin_slots_);
  f.add(dims_.size());
  for (const Port& p : ports_) {
    f.add(p.neighbour);
    f.add(p.slot);
  }
  for (std::size_t o : offsets_) f.add(o);
  fingerprint_ = f.h;
}

std::span<const Port> Substrate::ports(std::size_t vertex) const {
  if (vertex >= n_vertices()) {
    throw Error(ErrorKind::OutOfRange, "vertex " + std::to_string(vertex) + " out of range");
  }
  return {ports_.data() + offsets_[vertex], ports_.data() + offsets_[vertex + 1]};
}

std::vector<std::int64_t> Substrate::coordinates(std::size_t vertex) const {
  if (vertex >= n_vertices()) {
    throw Error(ErrorKind::OutOfRange, "vertex " + std::to_string(vertex) + " out of range");
  }
  std::vector<std::int64_t> c(dims_.size());
  std::size_t rest = vertex;
  for (std::size_t a = dims_.size(); a-- > 0;) {
    c[a] = static_cast<std::int64_t>(rest % dims_[a]);
    rest /= dims_[a];
  }
  return c;
}

bool Substrate::operator==(const Substrate& other) const {
  return offsets_ == other.offsets_ && ports_ == other.ports_ && dims_ == other.dims_ &&
         coin_slots_ == other.coin_slots_;
}

bool Substrate::same_graph(const Substrate& other) const {
  if (offsets_ != other.offsets_) return false;
  return std::equal(ports_.begin(), ports_.end(), other.ports_.begin(),
                    [](const Port& a, const Port& b) { return a.neighbour == b.neighbour; });
}

Substrate percolate(const Substrate& base, const PercolationSpec& spec) {
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "percolation probability must lie in [0,1]");
  }
  Rng rng(spec.seed);
  const std::size_t n = base.n_vertices();
  const auto& edges = base.edges();

  // keep_edge[i] refers to base.edges()[i].
  std::vector<char> keep_edge(edges.size(), 1);
  if (spec.mode == PercolationMode::Bond) {
    for (auto& k : keep_edge) k = rng.bernoulli(spec.p);
  } else {
    std::vector<char> keep_vertex(n);
    for (auto& k : keep_vertex) k = rng.bernoulli(spec.p);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      keep_edge[i] = keep_vertex[edges[i].first] && keep_vertex[edges[i].second];
    }
  }

  auto kept = [&](std::size_t u, std::size_t v) {
    const Edge e{std::min(u, v), std::max(u, v)};
    auto it = std::lower_bound(edges.begin(), edges.end(), e);
    return keep_edge[static_cast<std::size_t>(it - edges.begin())] != 0;
  };

  Substrate s;
  s.dims_ = base.dims_;
  s.boundary_ = base.boundary_;
  s.coin_slots_ = base.coin_slots_;
  s.ports_.reserve(base.ports_.size());
  for (std::size_t v = 0; v < n; ++v) {
    for (const Port& p : base.ports(v)) {
      if (kept(v, p.neighbour)) s.ports_.push_back(p);
    }
    s.offsets_.push_back(s.ports_.size());
  }
  if (!s.directional()) {
    // Plain graphs: slot is the port index, renumbered over surviving edges.
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t k = s.offsets_[v]; k < s.offsets_[v + 1]; ++k) s.ports_[k].slot = k - s.offsets_[v];
    }
  }
  std::ostringstream prov;
  prov << base.provenance() << "|percolate(" << (spec.mode == PercolationMode::Bond ? "bond" : "site")
       << ",p=" << spec.p << ",seed=" << spec.seed << ")";
  s.provenance_ = prov.str();
  s.finalize();
  return s;
}

void write_adjacency(std::ostream& out, const Substrate& substrate) {
  out << substrate.n_vertices() << '\n';
  for (auto [u, v] : substrate.edges()) out << u << ' ' << v << '\n';
}

void write_adjacency(const std::filesystem::path& path, const Substrate& substrate) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  write_adjacency(out, substrate);
  if (!out) throw Error(ErrorKind::Io, "write failed: " + path.string());
}

Substrate read_adjacency(std::istream& in) {
  long long n = 0;
  if (!(in >> n) || n <= 0) throw Error(ErrorKind::InvalidSize, "adjacency: missing or invalid vertex count");
  std::vector<Edge> edges;
  long long u = 0, v = 0;
  while (in >> u) {
    if (!(in >> v)) throw Error(ErrorKind::InvalidEdge, "adjacency: dangling vertex on last line");
    if (u < 0 || v < 0) throw Error(ErrorKind::OutOfRange, "adjacency: negative vertex index");
    edges.emplace_back(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
  }
  if (!in.eof()) throw Error(ErrorKind::InvalidEdge, "adjacency: non-numeric token");
  return Substrate::from_adjacency(edges, static_cast<std::size_t>(n));
}

Substrate read_adjacency(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_adjacency(in);
}

}  // namespace qwalk
