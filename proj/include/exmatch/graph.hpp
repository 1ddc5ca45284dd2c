#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "exmatch/errors.hpp"

namespace exmatch {

enum class Color : std::uint8_t { blue, red };

inline char color_char(Color c) { return c == Color::red ? 'r' : 'b'; }

struct Edge {
  int u;  // u < v always
  int v;
  Color color;
};

// Undirected simple graph, vertices 1..n, every edge red or blue.
// Edge ids are dense and stable: the i-th added edge has id i.
// An optional bipartition is the prefix split A = {1..side_a}, B = {side_a+1..n}.
class ColoredGraph {
public:
  explicit ColoredGraph(int n, std::optional<int> side_a = std::nullopt)
      : n_(n), side_a_(side_a) {
    if (n < 1) throw InputError("graph needs at least one vertex");
    if (side_a && (*side_a < 0 || *side_a > n))
      throw InputError("bipartition size out of range");
    id_at_.assign(static_cast<std::size_t>(n + 1) * (n + 1), -1);
    adj_.assign(n + 1, {});
  }

  int add_edge(int u, int v, Color color) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw InputError("loop edge rejected");
    if (u > v) std::swap(u, v);
    if (side_a_ && (side_a(u) == side_a(v)))
      throw InputError("edge inside one side of the bipartition");
    if (id_at_[cell(u, v)] != -1) throw InputError("duplicate edge rejected");
    int id = static_cast<int>(edges_.size());
    edges_.push_back({u, v, color});
    id_at_[cell(u, v)] = id;
    id_at_[cell(v, u)] = id;
    adj_[u].push_back(id);
    adj_[v].push_back(id);
    if (color == Color::red) red_ids_.push_back(id);
    return id;
  }

  int n() const { return n_; }
  int m() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int id) const { return edges_[static_cast<std::size_t>(id)]; }
  const std::vector<Edge>& edges() const { return edges_; }

  // -1 when absent.
  int edge_id(int u, int v) const {
    check_vertex(u);
    check_vertex(v);
    if (u == v) return -1;
    return id_at_[cell(u, v)];
  }

  int other_end(int id, int v) const {
    const Edge& e = edge(id);
    return e.u == v ? e.v : e.u;
  }

  // Edge ids incident to v, in insertion order.
  const std::vector<int>& incident(int v) const {
    check_vertex(v);
    return adj_[v];
  }

  const std::vector<int>& red_edge_ids() const { return red_ids_; }

  bool bipartite() const { return side_a_.has_value(); }
  int side_a_count() const { return side_a_.value_or(0); }
  // true = side A. Only meaningful when bipartite().
  bool side_a(int v) const { return side_a_ && v <= *side_a_; }

  ColoredGraph with_swapped_colors() const {
    ColoredGraph g(n_, side_a_);
    for (const Edge& e : edges_)
      g.add_edge(e.u, e.v, e.color == Color::red ? Color::blue : Color::red);
    return g;
  }

private:
  std::size_t cell(int u, int v) const {
    return static_cast<std::size_t>(u) * (n_ + 1) + v;
  }
  void check_vertex(int v) const {
    if (v < 1 || v > n_) throw InputError("vertex id out of range");
  }

  int n_;
  std::optional<int> side_a_;
  std::vector<Edge> edges_;
  std::vector<int> id_at_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> red_ids_;
};

// A perfect matching of a ColoredGraph, kept as partner map plus sorted edge ids.
// Immutable once built; red edge count is cached at construction.
class PerfectMatching {
public:
  PerfectMatching(const ColoredGraph& g, std::vector<int> edge_ids)
      : mate_(g.n() + 1, 0), edge_ids_(std::move(edge_ids)) {
    std::sort(edge_ids_.begin(), edge_ids_.end());
    if (std::adjacent_find(edge_ids_.begin(), edge_ids_.end()) != edge_ids_.end())
      throw InputError("matching has a repeated edge");
    for (int id : edge_ids_) {
      if (id < 0 || id >= g.m()) throw InputError("matching edge id out of range");
      const Edge& e = g.edge(id);
      if (mate_[e.u] != 0 || mate_[e.v] != 0)
        throw InputError("matching covers a vertex twice");
      mate_[e.u] = e.v;
      mate_[e.v] = e.u;
      if (e.color == Color::red) ++red_;
    }
    for (int v = 1; v <= g.n(); ++v)
      if (mate_[v] == 0) throw InputError("matching leaves a vertex exposed");
    in_.assign(g.m(), false);
    for (int id : edge_ids_) in_[static_cast<std::size_t>(id)] = true;
  }

  int mate(int v) const { return mate_[static_cast<std::size_t>(v)]; }
  // ids issued after this matching was built are simply not part of it
  bool has_edge(int id) const {
    return id >= 0 && id < static_cast<int>(in_.size()) && in_[static_cast<std::size_t>(id)];
  }
  const std::vector<int>& edge_ids() const { return edge_ids_; }
  int size() const { return static_cast<int>(edge_ids_.size()); }
  int red_count() const { return red_; }

  bool operator==(const PerfectMatching& o) const { return edge_ids_ == o.edge_ids_; }

private:
  std::vector<int> mate_;
  std::vector<int> edge_ids_;
  std::vector<bool> in_;
  int red_ = 0;
};

// Weight of an edge relative to a matching: blue edges are 0, red edges are
// +1 off the matching and -1 on it.
inline int edge_weight(const ColoredGraph& g, const PerfectMatching& m, int id) {
  if (g.edge(id).color == Color::blue) return 0;
  return m.has_edge(id) ? -1 : 1;
}

template <typename Container>
std::int64_t weight_sum(const ColoredGraph& g, const PerfectMatching& m,
                        const Container& edge_ids) {
  std::int64_t s = 0;
  for (int id : edge_ids) s += edge_weight(g, m, id);
  return s;
}

// Even cycle alternating between two matchings. verts[i] -- verts[i+1] is
// edge_ids[i]; the last edge closes back to verts[0]. Canonical orientation:
// verts[0] is the smallest vertex on the cycle and verts[1] the smaller of its
// two cycle neighbours.
struct AlternatingCycle {
  std::vector<int> verts;
  std::vector<int> edge_ids;

  int length() const { return static_cast<int>(edge_ids.size()); }

  int position_of(int v) const {
    for (std::size_t i = 0; i < verts.size(); ++i)
      if (verts[i] == v) return static_cast<int>(i);
    return -1;
  }
};

namespace detail {

inline AlternatingCycle canonical_cycle(const ColoredGraph& g, std::vector<int> verts) {
  std::size_t len = verts.size();
  std::size_t lo = 0;
  for (std::size_t i = 1; i < len; ++i)
    if (verts[i] < verts[lo]) lo = i;
  int prev = verts[(lo + len - 1) % len];
  int next = verts[(lo + 1) % len];
  std::vector<int> out(len);
  if (next < prev) {
    for (std::size_t i = 0; i < len; ++i) out[i] = verts[(lo + i) % len];
  } else {
    for (std::size_t i = 0; i < len; ++i) out[i] = verts[(lo + len - i) % len];
  }
  AlternatingCycle c;
  c.verts = std::move(out);
  c.edge_ids.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    int id = g.edge_id(c.verts[i], c.verts[(i + 1) % len]);
    if (id < 0) throw InputError("cycle uses a missing edge");
    c.edge_ids[i] = id;
  }
  return c;
}

}  // namespace detail

// Vertex-disjoint alternating cycles forming the symmetric difference of a
// base matching and another matching. Weights are always taken relative to
// the base.
class AlternatingCycleSet {
public:
  AlternatingCycleSet(const ColoredGraph& g, const PerfectMatching& base,
                      const PerfectMatching& other)
      : base_(base), cycle_at_(g.n() + 1, -1), pos_at_(g.n() + 1, -1) {
    if (base.size() != other.size())
      throw InputError("matchings live on different graphs");
    std::vector<bool> seen(g.n() + 1, false);
    for (int s = 1; s <= g.n(); ++s) {
      if (seen[s] || base.mate(s) == other.mate(s)) continue;
      // walk base-edge / other-edge alternately until back at s
      std::vector<int> verts;
      int v = s;
      bool take_base = true;
      do {
        verts.push_back(v);
        seen[v] = true;
        v = take_base ? base.mate(v) : other.mate(v);
        take_base = !take_base;
      } while (v != s);
      cycles_.push_back(detail::canonical_cycle(g, std::move(verts)));
    }
    std::sort(cycles_.begin(), cycles_.end(),
              [](const AlternatingCycle& a, const AlternatingCycle& b) {
                return a.verts[0] < b.verts[0];
              });
    for (std::size_t ci = 0; ci < cycles_.size(); ++ci) {
      const AlternatingCycle& c = cycles_[ci];
      total_edges_ += c.length();
      total_weight_ += weight_sum(g, base_, c.edge_ids);
      for (std::size_t i = 0; i < c.verts.size(); ++i) {
        cycle_at_[c.verts[i]] = static_cast<int>(ci);
        pos_at_[c.verts[i]] = static_cast<int>(i);
      }
    }
  }

  const std::vector<AlternatingCycle>& cycles() const { return cycles_; }
  const AlternatingCycle& cycle(int i) const { return cycles_[static_cast<std::size_t>(i)]; }
  int count() const { return static_cast<int>(cycles_.size()); }
  int total_edges() const { return total_edges_; }
  std::int64_t total_weight() const { return total_weight_; }
  const PerfectMatching& base() const { return base_; }

  // -1 when v lies on no cycle.
  int cycle_index_of(int v) const { return cycle_at_[static_cast<std::size_t>(v)]; }
  int position_of(int v) const { return pos_at_[static_cast<std::size_t>(v)]; }

  std::int64_t cycle_weight(const ColoredGraph& g, int i) const {
    return weight_sum(g, base_, cycle(i).edge_ids);
  }

private:
  PerfectMatching base_;
  std::vector<AlternatingCycle> cycles_;
  std::vector<int> cycle_at_;
  std::vector<int> pos_at_;
  int total_edges_ = 0;
  std::int64_t total_weight_ = 0;
};

inline AlternatingCycleSet sym_diff_cycles(const ColoredGraph& g,
                                           const PerfectMatching& base,
                                           const PerfectMatching& other) {
  return AlternatingCycleSet(g, base, other);
}

// m with the given edge set toggled. The edges must form alternating cycles,
// otherwise the result is not a perfect matching and construction throws.
template <typename Container>
PerfectMatching toggle(const ColoredGraph& g, const PerfectMatching& m,
                       const Container& cycle_edge_ids) {
  std::vector<bool> flip(g.m(), false);
  for (int id : cycle_edge_ids) {
    if (id < 0 || id >= g.m()) throw InputError("toggle edge id out of range");
    flip[static_cast<std::size_t>(id)] = !flip[static_cast<std::size_t>(id)];
  }
  std::vector<int> ids;
  for (int id : m.edge_ids())
    if (!flip[static_cast<std::size_t>(id)]) ids.push_back(id);
  for (int id = 0; id < g.m(); ++id)
    if (flip[static_cast<std::size_t>(id)] && !m.has_edge(id)) ids.push_back(id);
  return PerfectMatching(g, std::move(ids));
}

inline PerfectMatching toggle(const ColoredGraph& g, const PerfectMatching& m,
                              const AlternatingCycle& c) {
  return toggle(g, m, c.edge_ids);
}

// Forward walk from position i to position j inclusive (indices mod length).
// Returns the visited vertices and the edges between them.
inline std::pair<std::vector<int>, std::vector<int>> cycle_path(
    const AlternatingCycle& c, int i, int j) {
  int len = c.length();
  if (len == 0) throw InputError("empty cycle");
  i = ((i % len) + len) % len;
  j = ((j % len) + len) % len;
  std::vector<int> verts{c.verts[static_cast<std::size_t>(i)]};
  std::vector<int> eids;
  int p = i;
  while (p != j) {
    eids.push_back(c.edge_ids[static_cast<std::size_t>(p)]);
    p = (p + 1) % len;
    verts.push_back(c.verts[static_cast<std::size_t>(p)]);
  }
  return {std::move(verts), std::move(eids)};
}

// Checks that the edge ids form one simple cycle alternating on/off m and
// returns it in canonical orientation.
inline std::optional<AlternatingCycle> as_alternating_cycle(
    const ColoredGraph& g, const PerfectMatching& m, std::vector<int> edge_ids) {
  if (edge_ids.size() < 4 || edge_ids.size() % 2 != 0) return std::nullopt;
  std::sort(edge_ids.begin(), edge_ids.end());
  if (std::adjacent_find(edge_ids.begin(), edge_ids.end()) != edge_ids.end())
    return std::nullopt;
  std::vector<std::vector<int>> at(g.n() + 1);
  for (int id : edge_ids) {
    const Edge& e = g.edge(id);
    at[e.u].push_back(id);
    at[e.v].push_back(id);
    if (at[e.u].size() > 2 || at[e.v].size() > 2) return std::nullopt;
  }
  int start = g.edge(edge_ids[0]).u;
  std::vector<int> verts;
  int v = start;
  int via = -1;
  do {
    verts.push_back(v);
    int next_id = -1;
    for (int id : at[v])
      if (id != via) next_id = id;
    if (next_id < 0) return std::nullopt;
    via = next_id;
    v = g.other_end(next_id, v);
  } while (v != start && verts.size() <= edge_ids.size());
  if (verts.size() != edge_ids.size()) return std::nullopt;  // not one cycle
  for (int u : verts)
    if (at[u].size() != 2) return std::nullopt;
  // alternation: every vertex on the cycle uses its matching edge exactly once
  for (std::size_t i = 0; i < verts.size(); ++i) {
    int a = verts[i];
    int b = verts[(i + 1) % verts.size()];
    int c = verts[(i + 2) % verts.size()];
    bool ab = m.has_edge(g.edge_id(a, b));
    bool bc = m.has_edge(g.edge_id(b, c));
    if (ab == bc) return std::nullopt;
  }
  return detail::canonical_cycle(g, std::move(verts));
}

}  // namespace exmatch
