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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "privnav/common/error.hpp"
#include "privnav/roadgraph/roadgraph.hpp"

namespace privnav::roadgraph {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::vector<double>> floyd_warshall(const RoadGraph& g) {
  const std::size_t n = g.n();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const Edge& e : g.edges()) d[e.from][e.to] = std::min(d[e.from][e.to], e.w);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

std::vector<double> bellman_ford(const RoadGraph& g, std::uint32_t s) {
  std::vector<double> d(g.n(), kInf);
  d[s] = 0;
  for (std::size_t it = 0; it + 1 < g.n(); ++it)
    for (const Edge& e : g.edges()) d[e.to] = std::min(d[e.to], d[e.from] + e.w);
  return d;
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-6 * std::max(1.0, std::abs(b)); }

// Minimum total cost over all injections of the node's edges into {N,E,S,W}.
double brute_force_cost(const RoadGraph& g, std::uint32_t u) {
  std::vector<std::uint32_t> es = g.out_edges(u);
  std::vector<int> perm{0, 1, 2, 3};
  double best = kInf;
  do {
    double c = 0;
    for (std::size_t r = 0; r < es.size(); ++r) {
      const Node& b = g.nodes()[g.edges()[es[r]].to];
      c += direction_cost(b.x - g.nodes()[u].x, b.y - g.nodes()[u].y, kDirections[perm[r]]);
    }
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

double assigned_cost(const RoadGraph& g, std::uint32_t u) {
  double c = 0;
  for (std::uint32_t ei : g.out_edges(u)) {
    const Edge& e = g.edges()[ei];
    c += direction_cost(g.nodes()[e.to].x - g.nodes()[u].x, g.nodes()[e.to].y - g.nodes()[u].y, *e.dir);
  }
  return c;
}

RoadGraph star(std::size_t k) {
  RoadGraph g;
  g.add_node("c", 0, 0);
  for (std::size_t i = 0; i < k; ++i) {
    double a = 2 * M_PI * static_cast<double>(i) / static_cast<double>(k);
    std::uint32_t v = g.add_node("v" + std::to_string(i), std::cos(a), std::sin(a));
    g.add_edge(0, v, 1.0 + static_cast<double>(i));
    g.add_edge(v, 0, 1.0);
  }
  return g;
}

TEST(LoadGraph, TwoNodes) {
  RoadGraph g = load_graph(R"({"nodes":[{"id":"a","x":0,"y":0},{"id":"b","x":1,"y":0}],
                               "edges":[{"from":"a","to":"b","w":5}]})");
  EXPECT_EQ(g.n(), 2u);
  ASSERT_EQ(g.edges().size(), 1u);
  EXPECT_EQ(g.edges()[0].w, 5);
  EXPECT_FALSE(g.edges()[0].dir.has_value());
}

TEST(LoadGraph, Errors) {
  EXPECT_THROW(load_graph(R"({"nodes":[{"id":"a","x":0,"y":0}],"edges":[{"from":"a","to":"zz","w":1}]})"),
               InputError);
  EXPECT_THROW(load_graph(R"({"nodes":[{"id":"a","x":0,"y":0},{"id":"b","x":0,"y":1}],
                             "edges":[{"from":"a","to":"b","w":-1}]})"),
               InputError);
  EXPECT_THROW(load_graph("{not json"), InputError);
  EXPECT_THROW(load_graph(R"({"nodes":[]})"), InputError);
}

TEST(LoadGraph, GridDocument) {
  std::ostringstream doc;
  doc << R"({"nodes":[)";
  for (int j = 0; j < 10; ++j)
    for (int i = 0; i < 10; ++i) doc << (i || j ? "," : "") << R"({"id":")" << i << "_" << j << R"(","x":)" << i
                                     << R"(,"y":)" << j << "}";
  doc << R"(],"edges":[)";
  bool first = true;
  std::size_t expected = 0;
  for (int j = 0; j < 10; ++j)
    for (int i = 0; i < 10; ++i)
      for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        int a = i + di, b = j + dj;
        if (a < 0 || a >= 10 || b < 0 || b >= 10) continue;
        doc << (first ? "" : ",") << R"({"from":")" << i << "_" << j << R"(","to":")" << a << "_" << b
            << R"(","w":1})";
        first = false;
        ++expected;
      }
  doc << "]}";
  RoadGraph g = load_graph(doc.str());
  EXPECT_EQ(g.n(), 100u);
  EXPECT_EQ(g.edges().size(), expected);
  EXPECT_EQ(expected, 360u);
}

TEST(LoadGraph, JsonRoundTrip) {
  RoadGraph g = preprocess(synth_random(30, 4));
  RoadGraph h = load_graph(to_json(g));
  ASSERT_EQ(h.n(), g.n());
  ASSERT_EQ(h.edges().size(), g.edges().size());
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    EXPECT_EQ(h.edges()[i].from, g.edges()[i].from);
    EXPECT_EQ(h.edges()[i].dir, g.edges()[i].dir);
  }
  for (std::size_t i = 0; i < g.n(); ++i) EXPECT_EQ(h.nodes()[i].dummy, g.nodes()[i].dummy);
}

TEST(SynthGrid, SmallCases) {
  RoadGraph one = synth_grid(1, 1);
  EXPECT_EQ(one.n(), 1u);
  EXPECT_TRUE(one.edges().empty());
  RoadGraph four = synth_grid(2, 2);
  EXPECT_EQ(four.n(), 4u);
  EXPECT_EQ(four.edges().size(), 8u);
  EXPECT_THROW(synth_grid(0, 3), InputError);
}

TEST(SynthGrid, CornerToCornerIsManhattan) {
  RoadGraph g = synth_grid(10, 10);
  auto d = dijkstra(g, 0);
  EXPECT_DOUBLE_EQ(d[99], std::abs(9 - 0) + std::abs(9 - 0));
}

TEST(BoundDegree, FiveNeighbours) {
  RoadGraph g = star(5);
  RoadGraph b = bound_out_degree(g);
  EXPECT_EQ(b.n(), g.n() + 1);
  EXPECT_LE(b.max_out_degree(), 4u);
  const std::uint32_t dummy = static_cast<std::uint32_t>(g.n());
  EXPECT_TRUE(b.nodes()[dummy].dummy);
  std::vector<std::uint32_t> centre_targets, dummy_targets;
  for (std::uint32_t ei : b.out_edges(0)) centre_targets.push_back(b.edges()[ei].to);
  for (std::uint32_t ei : b.out_edges(dummy)) dummy_targets.push_back(b.edges()[ei].to);
  EXPECT_EQ(centre_targets, (std::vector<std::uint32_t>{1, 2, 3, dummy}));
  EXPECT_EQ(dummy_targets, (std::vector<std::uint32_t>{4, 5}));
  EXPECT_EQ(b.edges()[b.out_edges(0).back()].w, 0.0);
  EXPECT_EQ(b.nodes()[dummy].x, b.nodes()[0].x);
  EXPECT_EQ(b.nodes()[dummy].y, b.nodes()[0].y);
}

TEST(BoundDegree, AlreadyBoundedIsUnchanged) {
  RoadGraph g = synth_grid(4, 4, {WeightRule::Kind::kRandom, 3});
  RoadGraph b = bound_out_degree(g);
  ASSERT_EQ(b.n(), g.n());
  ASSERT_EQ(b.edges().size(), g.edges().size());
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    EXPECT_EQ(b.edges()[i].from, g.edges()[i].from);
    EXPECT_EQ(b.edges()[i].to, g.edges()[i].to);
    EXPECT_EQ(b.edges()[i].w, g.edges()[i].w);
  }
}

TEST(BoundDegree, NineNeighboursChainTwoDummies) {
  RoadGraph g = star(9);
  RoadGraph b = bound_out_degree(g);
  EXPECT_EQ(b.n(), g.n() + 2);
  EXPECT_LE(b.max_out_degree(), 4u);
  auto before = dijkstra(g, 0), after = dijkstra(b, 0);
  for (std::uint32_t v = 1; v <= 9; ++v) EXPECT_DOUBLE_EQ(after[v], before[v]);
}

TEST(BoundDegree, PreservesDistancesOnRandomGraphs) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    RoadGraph g = synth_random(10 + 5 * seed, seed, 5);
    RoadGraph b = bound_out_degree(g);
    EXPECT_LE(b.max_out_degree(), 4u);
    auto ref = floyd_warshall(g);
    for (std::uint32_t s = 0; s < g.n(); ++s) {
      auto d = dijkstra(b, s);
      for (std::uint32_t t = 0; t < g.n(); ++t) ASSERT_TRUE(near(d[t], ref[s][t])) << seed << " " << s << " " << t;
    }
  }
}

TEST(Orient, SingleNorthNeighbour) {
  RoadGraph g;
  g.add_node("a", 0, 0);
  g.add_node("b", 0, 1);
  g.add_edge(0, 1, 1);
  RoadGraph o = orient_edges(g);
  EXPECT_EQ(o.edges()[0].dir, Direction::N);
}

TEST(Orient, AxisAligned) {
  RoadGraph g;
  g.add_node("c", 0, 0);
  for (auto [x, y] : {std::pair{0.0, 1.0}, {1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}}) {
    std::uint32_t v = g.add_node("v" + std::to_string(g.n()), x, y);
    g.add_edge(0, v, 1);
  }
  RoadGraph o = orient_edges(g);
  EXPECT_EQ(o.edges()[0].dir, Direction::N);
  EXPECT_EQ(o.edges()[1].dir, Direction::E);
  EXPECT_EQ(o.edges()[2].dir, Direction::S);
  EXPECT_EQ(o.edges()[3].dir, Direction::W);
}

TEST(Orient, MatchesBruteForce) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0, 2 * M_PI);
  for (int trial = 0; trial < 300; ++trial) {
    RoadGraph g;
    g.add_node("c", 0, 0);
    int k = 1 + trial % 4;
    for (int i = 0; i < k; ++i) {
      double a = ang(rng);
      std::uint32_t v = g.add_node("v" + std::to_string(i), std::cos(a) * (1 + i), std::sin(a) * (1 + i));
      g.add_edge(0, v, 1);
    }
    RoadGraph o = orient_edges(g);
    EXPECT_NEAR(assigned_cost(o, 0), brute_force_cost(g, 0), 1e-9);
  }
}

TEST(Orient, HungarianMatchesBruteForceOnRandomMatrices) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0, 10);
  for (int trial = 0; trial < 500; ++trial) {
    int rows = 1 + trial % 4;
    std::vector<std::vector<double>> c(rows, std::vector<double>(4));
    for (auto& row : c)
      for (auto& v : row) v = u(rng);
    auto assign = hungarian(c);
    double got = 0;
    std::vector<bool> used(4, false);
    for (int r = 0; r < rows; ++r) {
      ASSERT_FALSE(used[assign[r]]);
      used[assign[r]] = true;
      got += c[r][assign[r]];
    }
    std::vector<int> perm{0, 1, 2, 3};
    double best = kInf;
    do {
      double s = 0;
      for (int r = 0; r < rows; ++r) s += c[r][perm[r]];
      best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_NEAR(got, best, 1e-9);
  }
}

TEST(Orient, PerNodeOptimalAndDistinctOnRandomGraphs) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    RoadGraph g = bound_out_degree(synth_random(40, seed, 4));
    RoadGraph o = orient_edges(g);
    for (std::uint32_t u = 0; u < o.n(); ++u) {
      std::vector<Direction> seen;
      for (std::uint32_t ei : o.out_edges(u)) seen.push_back(*o.edges()[ei].dir);
      std::sort(seen.begin(), seen.end());
      EXPECT_EQ(std::adjacent_find(seen.begin(), seen.end()), seen.end());
      EXPECT_NEAR(assigned_cost(o, u), brute_force_cost(g, u), 1e-9);
    }
  }
}

TEST(Orient, ZeroVectorDoesNotCrash) {
  RoadGraph g;
  g.add_node("a", 0, 0);
  g.add_node("b", 0, 0);
  g.add_node("c", 1, 0);
  g.add_edge(0, 1, 0);
  g.add_edge(0, 2, 1);
  RoadGraph o = orient_edges(g);
  EXPECT_EQ(o.edges()[1].dir, Direction::E);
  EXPECT_TRUE(o.edges()[0].dir.has_value());
}

TEST(Directions, IndexBijection) {
  EXPECT_EQ(index_to_direction(0, 0), Direction::N);
  EXPECT_EQ(index_to_direction(0, 1), Direction::E);
  EXPECT_EQ(index_to_direction(1, 0), Direction::W);
  EXPECT_EQ(index_to_direction(1, 1), Direction::S);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) EXPECT_EQ(direction_to_index(index_to_direction(a, b)), std::make_pair(a, b));
}

TEST(NextHop, TwoNodesEast) {
  RoadGraph g;
  g.add_node("a", 0, 0);
  g.add_node("b", 1, 0);
  g.add_edge(0, 1, 1);
  g.add_edge(1, 0, 1);
  NextHopMatrices m = all_pairs_next_hop(orient_edges(g));
  EXPECT_EQ(m.bit_ne(0, 1), 0);
  EXPECT_EQ(m.bit_nw(0, 1), 1);
  EXPECT_EQ(m.direction(0, 1), Direction::E);
}

TEST(NextHop, PathGraph) {
  RoadGraph g;
  for (int i = 0; i < 3; ++i) g.add_node(std::string(1, 'A' + i), i, 0);
  for (std::uint32_t i = 0; i + 1 < 3; ++i) {
    g.add_edge(i, i + 1, 1);
    g.add_edge(i + 1, i, 1);
  }
  NextHopMatrices m = all_pairs_next_hop(orient_edges(g));
  EXPECT_EQ(m.bit_ne(0, 2), 0);
  EXPECT_EQ(m.bit_nw(0, 2), 1);
}

void expect_next_hops_on_shortest_paths(const RoadGraph& g, const NextHopMatrices& m) {
  for (std::uint32_t s = 0; s < g.n(); ++s) {
    auto ref = bellman_ford(g, s);
    for (std::uint32_t t = 0; t < g.n(); ++t) {
      if (s == t) continue;
      std::uint32_t v = g.neighbor(s, m.direction(s, t));
      ASSERT_NE(v, kNoNode);
      double w = kInf;
      for (std::uint32_t ei : g.out_edges(s))
        if (g.edges()[ei].to == v) w = std::min(w, g.edges()[ei].w);
      auto from_v = bellman_ford(g, v);
      ASSERT_TRUE(near(w + from_v[t], ref[t])) << s << "->" << t;
    }
  }
}

TEST(NextHop, GridMatchesBellmanFordOracle) {
  RoadGraph g = preprocess(synth_grid(4, 4));
  NextHopMatrices m = all_pairs_next_hop(g);
  expect_next_hops_on_shortest_paths(g, m);
  RoadGraph r = preprocess(synth_grid(4, 4, {WeightRule::Kind::kRandom, 11}));
  expect_next_hops_on_shortest_paths(r, all_pairs_next_hop(r));
}

TEST(NextHop, WalksReachTargetWithShortestWeight) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    RoadGraph g = preprocess(synth_random(35, seed, 5));
    NextHopMatrices m = all_pairs_next_hop(g);
    auto ref = floyd_warshall(g);
    for (std::uint32_t s = 0; s < g.n(); ++s)
      for (std::uint32_t t = 0; t < g.n(); ++t) {
        if (s == t) continue;
        auto path = next_hop_walk(g, m, s, t);
        ASSERT_LE(path.size(), g.n() - 1);
        ASSERT_EQ(path.back(), t);
        double w = 0;
        std::uint32_t cur = s;
        for (std::uint32_t v : path) {
          double best = kInf;
          for (std::uint32_t ei : g.out_edges(cur))
            if (g.edges()[ei].to == v) best = std::min(best, g.edges()[ei].w);
          w += best;
          cur = v;
        }
        ASSERT_TRUE(near(w, ref[s][t]));
      }
    std::uint32_t longest = 0;
    for (std::uint32_t s = 0; s < g.n(); ++s)
      for (std::uint32_t t = 0; t < g.n(); ++t)
        if (s != t) longest = std::max<std::uint32_t>(longest, next_hop_walk(g, m, s, t).size());
    EXPECT_EQ(max_walk_length(g, m), longest);
  }
}

TEST(NextHop, UnreachablePairIsAnError) {
  RoadGraph g;
  g.add_node("a", 0, 0);
  g.add_node("b", 1, 0);
  g.add_edge(0, 1, 1);
  try {
    all_pairs_next_hop(orient_edges(g));
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("a"), std::string::npos);
  }
}

TEST(NextHop, FileRoundTrip) {
  RoadGraph g = preprocess(synth_grid(5, 3));
  NextHopMatrices m = all_pairs_next_hop(g);
  auto path = std::filesystem::temp_directory_path() / "privnav_nexthop_test.prnh";
  save_next_hop(m, path);
  NextHopMatrices r = load_next_hop(path);
  EXPECT_EQ(r.n, m.n);
  EXPECT_EQ(r.ne, m.ne);
  EXPECT_EQ(r.nw, m.nw);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace privnav::roadgraph
