// Copyright 2026 The privnav Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace privnav::roadgraph {

enum class Direction : std::uint8_t { N = 0, E = 1, S = 2, W = 3 };
inline constexpr std::array<Direction, 4> kDirections = {Direction::N, Direction::E, Direction::S,
                                                         Direction::W};
char direction_name(Direction d);

// (0,0) -> N, (0,1) -> E, (1,0) -> W, (1,1) -> S.
Direction index_to_direction(int b_ne, int b_nw);
std::pair<int, int> direction_to_index(Direction d);

inline constexpr std::uint32_t kNoNode = 0xffffffffu;

struct Node {
  std::string id;
  double x = 0;
  double y = 0;
  bool dummy = false;
};

struct Edge {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  double w = 0;
  std::optional<Direction> dir;
};

class RoadGraph {
 public:
  std::uint32_t add_node(std::string id, double x, double y, bool dummy = false);
  // Validates endpoints and weight.
  void add_edge(std::uint32_t from, std::uint32_t to, double w);

  std::size_t n() const { return nodes_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::vector<Edge>& mutable_edges() { return edges_; }
  // Edge indices leaving u, in insertion order.
  std::vector<std::uint32_t> out_edges(std::uint32_t u) const;
  std::size_t max_out_degree() const;
  bool oriented() const;

  // Successor of u in direction d, or kNoNode.
  std::uint32_t neighbor(std::uint32_t u, Direction d) const;
  // Per node, neighbours indexed by direction (requires orientation).
  std::vector<std::array<std::uint32_t, 4>> topology() const;

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
};

// JSON document: {"nodes": [{"id","x","y"}...], "edges": [{"from","to","w"}...]}.
// Optional keys "dummy" (node) and "dir" (edge) are written by to_json and
// accepted on input.
RoadGraph load_graph(std::string_view document);
RoadGraph load_graph_file(const std::filesystem::path& path);
std::string to_json(const RoadGraph& g);

struct WeightRule {
  enum class Kind { kUnit, kRandom };
  Kind kind = Kind::kUnit;
  std::uint64_t seed = 1;
  double lo = 1.0;
  double hi = 10.0;
};

// 4-connected grid, node (i, j) at coordinates (i, j), id "i,j", index j*width+i.
RoadGraph synth_grid(std::size_t width, std::size_t height, const WeightRule& rule = {});

// Random planar geometric graph: points in a square, each joined to its
// nearest neighbours plus a spanning chain, all edges bidirectional, so the
// result is strongly connected. Degrees can exceed 4.
RoadGraph synth_random(std::size_t n, std::uint64_t seed, std::size_t neighbours = 3);

// Splits high-degree nodes with zero-weight edges to dummy nodes.
RoadGraph bound_out_degree(const RoadGraph& g);

// Assigns per-node distinct directions minimising total angular cost.
RoadGraph orient_edges(const RoadGraph& g);

// Full preprocessing: bound degree then orient.
RoadGraph preprocess(const RoadGraph& g);

// Minimum-cost assignment of rows to distinct columns (rows <= cols).
// Returns the column chosen for each row.
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost);

// Angle in [0, pi] between (dx, dy) and direction d; pi for a zero vector.
double direction_cost(double dx, double dy, Direction d);

struct NextHopMatrices {
  std::size_t n = 0;
  std::vector<std::uint8_t> ne;  // row-major n*n
  std::vector<std::uint8_t> nw;

  std::uint8_t bit_ne(std::size_t s, std::size_t t) const { return ne[s * n + t]; }
  std::uint8_t bit_nw(std::size_t s, std::size_t t) const { return nw[s * n + t]; }
  bool valid(std::size_t s, std::size_t t) const { return s != t; }
  Direction direction(std::size_t s, std::size_t t) const {
    return index_to_direction(bit_ne(s, t), bit_nw(s, t));
  }
};

// Single-source shortest distances; weights are compared after quantisation
// to integer micro-units so equal-length paths tie exactly.
std::vector<double> dijkstra(const RoadGraph& g, std::uint32_t source);

// Throws InputError naming an unreachable pair.
NextHopMatrices all_pairs_next_hop(const RoadGraph& g);

// Follows next hops from s; the returned list excludes s and ends with t.
// Throws if the walk fails to reach t within n steps.
std::vector<std::uint32_t> next_hop_walk(const RoadGraph& g, const NextHopMatrices& m, std::uint32_t s,
                                         std::uint32_t t);

// Longest next-hop walk over all ordered pairs.
std::uint32_t max_walk_length(const RoadGraph& g, const NextHopMatrices& m);

// Binary next-hop file: "PRNH", u32 n, then ne and nw bit-packed row-major.
void save_next_hop(const NextHopMatrices& m, const std::filesystem::path& path);
NextHopMatrices load_next_hop(const std::filesystem::path& path);

}  // namespace privnav::roadgraph
