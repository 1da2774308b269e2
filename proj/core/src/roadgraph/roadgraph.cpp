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

#include "privnav/roadgraph/roadgraph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "privnav/common/bytes.hpp"
#include "privnav/common/error.hpp"

namespace privnav::roadgraph {

char direction_name(Direction d) {
  static constexpr char kNames[] = {'N', 'E', 'S', 'W'};
  return kNames[static_cast<int>(d)];
}

Direction index_to_direction(int b_ne, int b_nw) {
  if (b_ne == 0) return b_nw == 0 ? Direction::N : Direction::E;
  return b_nw == 0 ? Direction::W : Direction::S;
}

std::pair<int, int> direction_to_index(Direction d) {
  switch (d) {
    case Direction::N: return {0, 0};
    case Direction::E: return {0, 1};
    case Direction::W: return {1, 0};
    case Direction::S: return {1, 1};
  }
  return {0, 0};
}

std::uint32_t RoadGraph::add_node(std::string id, double x, double y, bool dummy) {
  if (!std::isfinite(x) || !std::isfinite(y)) throw InputError("node " + id + ": non-finite coordinate");
  nodes_.push_back(Node{std::move(id), x, y, dummy});
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

void RoadGraph::add_edge(std::uint32_t from, std::uint32_t to, double w) {
  if (from >= n() || to >= n()) throw InputError("edge endpoint out of range");
  if (!(w >= 0) || !std::isfinite(w)) throw InputError("edge weight must be finite and nonnegative");
  edges_.push_back(Edge{from, to, w, std::nullopt});
}

std::vector<std::uint32_t> RoadGraph::out_edges(std::uint32_t u) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].from == u) out.push_back(i);
  return out;
}

std::size_t RoadGraph::max_out_degree() const {
  std::vector<std::size_t> deg(n(), 0);
  for (const Edge& e : edges_) ++deg[e.from];
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

bool RoadGraph::oriented() const {
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.dir.has_value(); });
}

std::uint32_t RoadGraph::neighbor(std::uint32_t u, Direction d) const {
  for (const Edge& e : edges_)
    if (e.from == u && e.dir == d) return e.to;
  return kNoNode;
}

std::vector<std::array<std::uint32_t, 4>> RoadGraph::topology() const {
  std::vector<std::array<std::uint32_t, 4>> topo(n());
  for (auto& t : topo) t.fill(kNoNode);
  for (const Edge& e : edges_) {
    if (!e.dir) throw InputError("topology requires an oriented graph");
    auto& slot = topo[e.from][static_cast<int>(*e.dir)];
    if (slot != kNoNode) throw InputError("node " + nodes_[e.from].id + " has two edges with one direction");
    slot = e.to;
  }
  return topo;
}

RoadGraph load_graph(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("graph document: ") + e.what());
  }
  RoadGraph g;
  try {
    if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges"))
      throw InputError("graph document needs 'nodes' and 'edges'");
    std::unordered_map<std::string, std::uint32_t> index;
    auto id_of = [](const nlohmann::json& v) {
      return v.is_string() ? v.get<std::string>() : v.dump();
    };
    for (const auto& nd : doc.at("nodes")) {
      std::string id = id_of(nd.at("id"));
      if (index.count(id)) throw InputError("duplicate node id " + id);
      index[id] = g.add_node(id, nd.at("x").get<double>(), nd.at("y").get<double>(),
                             nd.value("dummy", false));
    }
    static const std::unordered_map<std::string, Direction> kDirs = {
        {"N", Direction::N}, {"E", Direction::E}, {"S", Direction::S}, {"W", Direction::W}};
    for (const auto& ed : doc.at("edges")) {
      std::string from = id_of(ed.at("from")), to = id_of(ed.at("to"));
      auto fi = index.find(from), ti = index.find(to);
      if (fi == index.end()) throw InputError("edge references unknown node " + from);
      if (ti == index.end()) throw InputError("edge references unknown node " + to);
      double w = ed.at("w").get<double>();
      if (w < 0) throw InputError("negative weight on edge " + from + "->" + to);
      g.add_edge(fi->second, ti->second, w);
      if (ed.contains("dir")) {
        auto it = kDirs.find(ed.at("dir").get<std::string>());
        if (it == kDirs.end()) throw InputError("bad direction on edge " + from + "->" + to);
        g.mutable_edges().back().dir = it->second;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("graph document: ") + e.what());
  }
  return g;
}

RoadGraph load_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return load_graph(ss.str());
}

std::string to_json(const RoadGraph& g) {
  nlohmann::json doc;
  doc["nodes"] = nlohmann::json::array();
  doc["edges"] = nlohmann::json::array();
  for (const Node& nd : g.nodes()) {
    nlohmann::json j = {{"id", nd.id}, {"x", nd.x}, {"y", nd.y}};
    if (nd.dummy) j["dummy"] = true;
    doc["nodes"].push_back(j);
  }
  for (const Edge& e : g.edges()) {
    nlohmann::json j = {{"from", g.nodes()[e.from].id}, {"to", g.nodes()[e.to].id}, {"w", e.w}};
    if (e.dir) j["dir"] = std::string(1, direction_name(*e.dir));
    doc["edges"].push_back(j);
  }
  return doc.dump(1);
}

RoadGraph synth_grid(std::size_t width, std::size_t height, const WeightRule& rule) {
  if (width < 1 || height < 1) throw InputError("grid dimensions must be positive");
  std::mt19937_64 rng(rule.seed);
  std::uniform_real_distribution<double> dist(rule.lo, rule.hi);
  auto weight = [&] { return rule.kind == WeightRule::Kind::kUnit ? 1.0 : dist(rng); };
  RoadGraph g;
  for (std::size_t j = 0; j < height; ++j)
    for (std::size_t i = 0; i < width; ++i)
      g.add_node(std::to_string(i) + "," + std::to_string(j), static_cast<double>(i), static_cast<double>(j));
  auto id = [&](std::size_t i, std::size_t j) { return static_cast<std::uint32_t>(j * width + i); };
  for (std::size_t j = 0; j < height; ++j)
    for (std::size_t i = 0; i < width; ++i) {
      if (i + 1 < width) {
        g.add_edge(id(i, j), id(i + 1, j), weight());
        g.add_edge(id(i + 1, j), id(i, j), weight());
      }
      if (j + 1 < height) {
        g.add_edge(id(i, j), id(i, j + 1), weight());
        g.add_edge(id(i, j + 1), id(i, j), weight());
      }
    }
  return g;
}

RoadGraph synth_random(std::size_t n, std::uint64_t seed, std::size_t neighbours) {
  if (n < 1) throw InputError("random graph needs at least one node");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 100.0);
  std::uniform_real_distribution<double> slow(1.0, 1.5);
  RoadGraph g;
  std::vector<std::pair<double, double>> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i] = {coord(rng), coord(rng)};
    g.add_node("r" + std::to_string(i), pts[i].first, pts[i].second);
  }
  auto dist = [&](std::size_t a, std::size_t b) {
    return std::hypot(pts[a].first - pts[b].first, pts[a].second - pts[b].second);
  };
  std::set<std::pair<std::size_t, std::size_t>> links;
  auto link = [&](std::size_t a, std::size_t b) { links.insert({std::min(a, b), std::max(a, b)}); };
  // Euclidean minimum spanning tree (Prim) keeps the graph connected.
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> parent(n, 0);
  std::vector<bool> in_tree(n, false);
  best[0] = 0;
  for (std::size_t it = 0; it < n; ++it) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v)
      if (!in_tree[v] && (u == n || best[v] < best[u])) u = v;
    in_tree[u] = true;
    if (u != 0) link(parent[u], u);
    for (std::size_t v = 0; v < n; ++v)
      if (!in_tree[v] && dist(u, v) < best[v]) {
        best[v] = dist(u, v);
        parent[v] = u;
      }
  }
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<std::size_t> order;
    for (std::size_t v = 0; v < n; ++v)
      if (v != u) order.push_back(v);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist(u, a) < dist(u, b); });
    for (std::size_t k = 0; k < std::min(neighbours, order.size()); ++k) link(u, order[k]);
  }
  for (auto [a, b] : links) {
    double d = dist(a, b);
    g.add_edge(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), d * slow(rng));
    g.add_edge(static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(a), d * slow(rng));
  }
  return g;
}

RoadGraph bound_out_degree(const RoadGraph& g) {
  RoadGraph out;
  for (const Node& nd : g.nodes()) out.add_node(nd.id, nd.x, nd.y, nd.dummy);
  // Original edges keep their order; only their tail may move to a dummy.
  std::vector<std::uint32_t> tail(g.edges().size());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> links;
  for (std::uint32_t u = 0; u < g.n(); ++u) {
    std::vector<std::uint32_t> es = g.out_edges(u);
    std::uint32_t head = u;
    std::size_t pos = 0;
    int split = 0;
    // Each split keeps three real edges and hands the rest to a dummy node.
    while (es.size() - pos > 4) {
      for (int k = 0; k < 3; ++k, ++pos) tail[es[pos]] = head;
      const Node& src = g.nodes()[u];
      std::uint32_t dummy = out.add_node(src.id + "~" + std::to_string(++split), src.x, src.y, true);
      links.emplace_back(head, dummy);
      head = dummy;
    }
    for (; pos < es.size(); ++pos) tail[es[pos]] = head;
  }
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    const Edge& e = g.edges()[i];
    out.add_edge(tail[i], e.to, e.w);
  }
  for (auto [from, to] : links) out.add_edge(from, to, 0.0);
  return out;
}

double direction_cost(double dx, double dy, Direction d) {
  if (dx == 0 && dy == 0) return std::numbers::pi;
  static constexpr double kUx[] = {0, 1, 0, -1};
  static constexpr double kUy[] = {1, 0, -1, 0};
  int i = static_cast<int>(d);
  double c = (dx * kUx[i] + dy * kUy[i]) / std::hypot(dx, dy);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
  const int rows = static_cast<int>(cost.size());
  if (rows == 0) return {};
  const int cols = static_cast<int>(cost[0].size());
  if (rows > cols) throw InputError("hungarian: more rows than columns");
  const double kInf = std::numeric_limits<double>::infinity();
  // Potentials formulation, 1-indexed with a virtual column 0.
  std::vector<double> u(rows + 1, 0), v(cols + 1, 0);
  std::vector<int> match(cols + 1, 0), way(cols + 1, 0);
  for (int i = 1; i <= rows; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(cols + 1, kInf);
    std::vector<bool> used(cols + 1, false);
    do {
      used[j0] = true;
      int i0 = match[j0], j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> result(rows, -1);
  for (int j = 1; j <= cols; ++j)
    if (match[j] != 0) result[match[j] - 1] = j - 1;
  return result;
}

RoadGraph orient_edges(const RoadGraph& g) {
  if (g.max_out_degree() > 4) throw InputError("orient_edges requires out-degree <= 4");
  RoadGraph out = g;
  for (std::uint32_t u = 0; u < g.n(); ++u) {
    std::vector<std::uint32_t> es = g.out_edges(u);
    if (es.empty()) continue;
    std::vector<std::vector<double>> cost(es.size(), std::vector<double>(4));
    const Node& a = g.nodes()[u];
    for (std::size_t r = 0; r < es.size(); ++r) {
      const Node& b = g.nodes()[g.edges()[es[r]].to];
      for (int c = 0; c < 4; ++c) cost[r][c] = direction_cost(b.x - a.x, b.y - a.y, kDirections[c]);
    }
    std::vector<int> assign = hungarian(cost);
    for (std::size_t r = 0; r < es.size(); ++r) out.mutable_edges()[es[r]].dir = kDirections[assign[r]];
  }
  return out;
}

RoadGraph preprocess(const RoadGraph& g) { return orient_edges(bound_out_degree(g)); }

namespace {

using Micro = std::int64_t;

Micro quantise(double w) { return static_cast<Micro>(std::llround(w * 1e6)); }

struct Adjacency {
  // Per node, (target, micro-weight, edge index) sorted by target id.
  std::vector<std::vector<std::tuple<std::uint32_t, Micro, std::uint32_t>>> out;
  explicit Adjacency(const RoadGraph& g) : out(g.n()) {
    for (std::uint32_t i = 0; i < g.edges().size(); ++i) {
      const Edge& e = g.edges()[i];
      out[e.from].emplace_back(e.to, quantise(e.w), i);
    }
    for (auto& v : out) std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
      return std::get<0>(a) < std::get<0>(b);
    });
  }
};

struct Tree {
  std::vector<Micro> dist;
  std::vector<std::uint32_t> hops;
  std::vector<std::uint32_t> first_edge;
};

constexpr Micro kUnreached = std::numeric_limits<Micro>::max();

// Lexicographic (distance, hops) keys: with zero-weight edges the hop count
// still strictly decreases along a followed next-hop walk.
Tree shortest_tree(const Adjacency& adj, std::uint32_t s) {
  const std::size_t n = adj.out.size();
  Tree t{std::vector<Micro>(n, kUnreached), std::vector<std::uint32_t>(n, 0),
         std::vector<std::uint32_t>(n, kNoNode)};
  using Key = std::tuple<Micro, std::uint32_t, std::uint32_t>;
  std::priority_queue<Key, std::vector<Key>, std::greater<Key>> pq;
  std::vector<bool> done(n, false);
  t.dist[s] = 0;
  pq.emplace(0, 0, s);
  while (!pq.empty()) {
    auto [d, h, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = true;
    for (auto [v, w, ei] : adj.out[u]) {
      Micro nd = d + w;
      std::uint32_t nh = h + 1;
      if (done[v]) continue;
      if (nd < t.dist[v] || (nd == t.dist[v] && nh < t.hops[v])) {
        t.dist[v] = nd;
        t.hops[v] = nh;
        t.first_edge[v] = (u == s) ? ei : t.first_edge[u];
        pq.emplace(nd, nh, v);
      }
    }
  }
  return t;
}

}  // namespace

std::vector<double> dijkstra(const RoadGraph& g, std::uint32_t source) {
  if (source >= g.n()) throw InputError("dijkstra: source out of range");
  Tree t = shortest_tree(Adjacency(g), source);
  std::vector<double> out(g.n());
  for (std::size_t i = 0; i < g.n(); ++i)
    out[i] = t.dist[i] == kUnreached ? std::numeric_limits<double>::infinity() : t.dist[i] / 1e6;
  return out;
}

NextHopMatrices all_pairs_next_hop(const RoadGraph& g) {
  if (!g.oriented()) throw InputError("all_pairs_next_hop requires an oriented graph");
  const std::size_t n = g.n();
  Adjacency adj(g);
  NextHopMatrices m{n, std::vector<std::uint8_t>(n * n, 0), std::vector<std::uint8_t>(n * n, 0)};
  for (std::uint32_t s = 0; s < n; ++s) {
    Tree t = shortest_tree(adj, s);
    for (std::uint32_t v = 0; v < n; ++v) {
      if (v == s) continue;
      if (t.dist[v] == kUnreached)
        throw InputError("node " + g.nodes()[v].id + " is unreachable from " + g.nodes()[s].id);
      auto [bne, bnw] = direction_to_index(*g.edges()[t.first_edge[v]].dir);
      m.ne[s * n + v] = static_cast<std::uint8_t>(bne);
      m.nw[s * n + v] = static_cast<std::uint8_t>(bnw);
    }
  }
  return m;
}

std::vector<std::uint32_t> next_hop_walk(const RoadGraph& g, const NextHopMatrices& m, std::uint32_t s,
                                         std::uint32_t t) {
  if (s >= m.n || t >= m.n) throw InputError("next_hop_walk: node out of range");
  std::vector<std::uint32_t> path;
  std::uint32_t cur = s;
  while (cur != t) {
    std::uint32_t v = g.neighbor(cur, m.direction(cur, t));
    if (v == kNoNode) throw InputError("next hop from " + g.nodes()[cur].id + " has no edge");
    path.push_back(v);
    cur = v;
    if (path.size() > m.n) throw InputError("next-hop walk does not terminate");
  }
  return path;
}

std::uint32_t max_walk_length(const RoadGraph& g, const NextHopMatrices& m) {
  const std::size_t n = m.n;
  auto topo = g.topology();
  std::uint32_t best = 0;
  std::vector<std::uint32_t> len(n);
  std::vector<std::uint8_t> state(n);
  std::vector<std::uint32_t> stack;
  for (std::uint32_t t = 0; t < n; ++t) {
    std::fill(state.begin(), state.end(), 0);
    len[t] = 0;
    state[t] = 2;
    for (std::uint32_t s = 0; s < n; ++s) {
      std::uint32_t cur = s;
      stack.clear();
      while (state[cur] != 2) {
        if (state[cur] == 1) throw InputError("next-hop walk does not terminate");
        state[cur] = 1;
        stack.push_back(cur);
        cur = topo[cur][static_cast<int>(m.direction(cur, t))];
        if (cur == kNoNode) throw InputError("next hop has no edge");
      }
      std::uint32_t l = len[cur];
      while (!stack.empty()) {
        std::uint32_t u = stack.back();
        stack.pop_back();
        len[u] = ++l;
        state[u] = 2;
      }
    }
    for (std::uint32_t s = 0; s < n; ++s) best = std::max(best, len[s]);
  }
  return best;
}

void save_next_hop(const NextHopMatrices& m, const std::filesystem::path& path) {
  ByteWriter w;
  w.raw(as_bytes("PRNH"));
  w.u32(static_cast<std::uint32_t>(m.n));
  for (const auto* bits : {&m.ne, &m.nw}) {
    Bytes packed((bits->size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits->size(); ++i)
      if ((*bits)[i]) packed[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    w.raw(packed);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(w.buffer().data()), static_cast<std::streamsize>(w.size()));
}

NextHopMatrices load_next_hop(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    ByteReader r(data);
    auto magic = r.raw(4);
    if (std::memcmp(magic.data(), "PRNH", 4) != 0) throw InputError(path.string() + ": not a next-hop file");
    NextHopMatrices m;
    m.n = r.u32();
    for (auto* bits : {&m.ne, &m.nw}) {
      ByteView packed = r.raw((m.n * m.n + 7) / 8);
      bits->assign(m.n * m.n, 0);
      for (std::size_t i = 0; i < bits->size(); ++i) (*bits)[i] = (packed[i / 8] >> (i % 8)) & 1;
    }
    r.expect_end();
    return m;
  } catch (const DecodeError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace privnav::roadgraph
