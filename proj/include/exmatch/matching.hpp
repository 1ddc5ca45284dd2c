#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>
#include <boost/graph/maximum_weighted_matching.hpp>

#include "exmatch/graph.hpp"

namespace exmatch {

struct MatchingEngineCaps {
  // below this vertex count, general-graph extremal matchings are found by
  // exhaustive search instead of the blossom solver; both must agree
  int brute_threshold = 16;
};

namespace detail {

// Hopcroft-Karp would be overkill at our sizes; plain augmenting paths.
inline int kuhn_max_matching(int na, int n, const ColoredGraph& g,
                             const std::vector<bool>& allowed_edge,
                             const std::vector<bool>& skip_vertex,
                             std::vector<int>& mate) {
  mate.assign(n + 1, 0);
  std::vector<bool> visited(n + 1, false);
  auto try_augment = [&](auto&& self, int a) -> bool {
    for (int id : g.incident(a)) {
      if (!allowed_edge[static_cast<std::size_t>(id)]) continue;
      int b = g.other_end(id, a);
      if (skip_vertex[static_cast<std::size_t>(b)] || visited[b]) continue;
      visited[b] = true;
      if (mate[b] == 0 || self(self, mate[b])) {
        mate[b] = a;
        mate[a] = b;
        return true;
      }
    }
    return false;
  };
  int size = 0;
  for (int a = 1; a <= na; ++a) {
    if (skip_vertex[static_cast<std::size_t>(a)]) continue;
    std::fill(visited.begin(), visited.end(), false);
    if (try_augment(try_augment, a)) ++size;
  }
  return size;
}

typedef boost::property<boost::edge_weight_t, long> BoostEdgeWeight;
typedef boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS,
                              boost::no_property, BoostEdgeWeight>
    BoostGraph;

inline int boost_max_matching(const ColoredGraph& g,
                              const std::vector<bool>& allowed_edge,
                              const std::vector<bool>& skip_vertex,
                              std::vector<int>& mate) {
  BoostGraph bg(static_cast<std::size_t>(g.n()));
  for (int id = 0; id < g.m(); ++id) {
    if (!allowed_edge[static_cast<std::size_t>(id)]) continue;
    const Edge& e = g.edge(id);
    if (skip_vertex[static_cast<std::size_t>(e.u)] ||
        skip_vertex[static_cast<std::size_t>(e.v)])
      continue;
    boost::add_edge(static_cast<std::size_t>(e.u - 1),
                    static_cast<std::size_t>(e.v - 1), bg);
  }
  std::vector<boost::graph_traits<BoostGraph>::vertex_descriptor> bm(
      static_cast<std::size_t>(g.n()));
  bool ok = boost::checked_edmonds_maximum_cardinality_matching(bg, &bm[0]);
  if (!ok) throw InputError("matching verifier failed");
  mate.assign(g.n() + 1, 0);
  int size = 0;
  for (int v = 1; v <= g.n(); ++v) {
    auto w = bm[static_cast<std::size_t>(v - 1)];
    if (w != boost::graph_traits<BoostGraph>::null_vertex()) {
      mate[v] = static_cast<int>(w) + 1;
      if (mate[v] > v) ++size;
    }
  }
  return size;
}

inline std::optional<PerfectMatching> matching_from_mates(const ColoredGraph& g,
                                                          const std::vector<int>& mate) {
  std::vector<int> ids;
  for (int v = 1; v <= g.n(); ++v) {
    if (mate[v] == 0) return std::nullopt;
    if (mate[v] > v) {
      int id = g.edge_id(v, mate[v]);
      if (id < 0) return std::nullopt;
      ids.push_back(id);
    }
  }
  return PerfectMatching(g, std::move(ids));
}

}  // namespace detail

inline bool pm_exists(const ColoredGraph& g) {
  if (g.n() % 2 != 0) return false;
  std::vector<bool> all_edges(static_cast<std::size_t>(g.m()), true);
  std::vector<bool> no_vertex(static_cast<std::size_t>(g.n() + 1), false);
  std::vector<int> mate;
  if (g.bipartite()) {
    if (g.side_a_count() * 2 != g.n()) return false;
    return detail::kuhn_max_matching(g.side_a_count(), g.n(), g, all_edges,
                                     no_vertex, mate) == g.n() / 2;
  }
  return detail::boost_max_matching(g, all_edges, no_vertex, mate) == g.n() / 2;
}

// Perfect matching that contains every forced edge and fills the rest with
// edges of the given color only.
inline std::optional<PerfectMatching> complete_monochromatic(
    const ColoredGraph& g, const std::vector<int>& forced_edge_ids, Color fill) {
  if (g.n() % 2 != 0) return std::nullopt;
  std::vector<bool> covered(static_cast<std::size_t>(g.n() + 1), false);
  for (int id : forced_edge_ids) {
    if (id < 0 || id >= g.m()) throw InputError("forced edge id out of range");
    const Edge& e = g.edge(id);
    if (covered[static_cast<std::size_t>(e.u)] || covered[static_cast<std::size_t>(e.v)])
      return std::nullopt;  // forced edges clash
    covered[static_cast<std::size_t>(e.u)] = true;
    covered[static_cast<std::size_t>(e.v)] = true;
  }
  std::vector<bool> allowed(static_cast<std::size_t>(g.m()), false);
  for (int id = 0; id < g.m(); ++id)
    if (g.edge(id).color == fill) allowed[static_cast<std::size_t>(id)] = true;
  std::vector<int> mate;
  int rest = 0;
  for (int v = 1; v <= g.n(); ++v)
    if (!covered[static_cast<std::size_t>(v)]) ++rest;
  int size;
  if (g.bipartite()) {
    size = detail::kuhn_max_matching(g.side_a_count(), g.n(), g, allowed, covered, mate);
  } else {
    size = detail::boost_max_matching(g, allowed, covered, mate);
  }
  if (2 * size != rest) return std::nullopt;
  std::vector<int> ids(forced_edge_ids);
  for (int v = 1; v <= g.n(); ++v)
    if (!covered[static_cast<std::size_t>(v)] && mate[v] > v)
      ids.push_back(g.edge_id(v, mate[v]));
  return PerfectMatching(g, std::move(ids));
}

enum class Extremal { min_red, max_red };

namespace detail {

// Successive shortest augmenting paths with plain Bellman-Ford rounds;
// costs are -1/0/+1 so no potentials are needed at these sizes.
inline std::optional<PerfectMatching> bipartite_extremal(const ColoredGraph& g,
                                                         Extremal which) {
  int na = g.side_a_count();
  int half = g.n() / 2;
  if (na != half) return std::nullopt;
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  // assignment on A x B, cost of red edges +1 (min) or -1 (max)
  std::vector<std::vector<std::int64_t>> cost(
      static_cast<std::size_t>(half), std::vector<std::int64_t>(half, kInf));
  for (const Edge& e : g.edges()) {
    int a = e.u <= na ? e.u : e.v;
    int b = (e.u <= na ? e.v : e.u) - na;
    std::int64_t c = e.color == Color::red ? (which == Extremal::min_red ? 1 : -1) : 0;
    cost[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)] = c;
  }
  std::vector<int> mate_a(static_cast<std::size_t>(half), -1);
  std::vector<int> mate_b(static_cast<std::size_t>(half), -1);
  for (int round = 0; round < half; ++round) {
    // Bellman-Ford over the residual graph from all free A-vertices
    std::vector<std::int64_t> dist_a(static_cast<std::size_t>(half), kInf);
    std::vector<std::int64_t> dist_b(static_cast<std::size_t>(half), kInf);
    std::vector<int> from_b(static_cast<std::size_t>(half), -1);
    for (int a = 0; a < half; ++a)
      if (mate_a[static_cast<std::size_t>(a)] < 0) dist_a[static_cast<std::size_t>(a)] = 0;
    for (int pass = 0; pass < g.n() + 1; ++pass) {
      bool changed = false;
      for (int a = 0; a < half; ++a) {
        if (dist_a[static_cast<std::size_t>(a)] >= kInf) continue;
        for (int b = 0; b < half; ++b) {
          std::int64_t c = cost[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
          if (c >= kInf || mate_b[static_cast<std::size_t>(b)] == a) continue;
          std::int64_t nd = dist_a[static_cast<std::size_t>(a)] + c;
          if (nd < dist_b[static_cast<std::size_t>(b)]) {
            dist_b[static_cast<std::size_t>(b)] = nd;
            from_b[static_cast<std::size_t>(b)] = a;
            int ma = mate_b[static_cast<std::size_t>(b)];
            if (ma >= 0) {
              std::int64_t back =
                  nd - cost[static_cast<std::size_t>(ma)][static_cast<std::size_t>(b)];
              if (back < dist_a[static_cast<std::size_t>(ma)]) {
                dist_a[static_cast<std::size_t>(ma)] = back;
              }
            }
            changed = true;
          }
        }
      }
      if (!changed) break;
      if (pass == g.n()) throw InputError("negative cycle in assignment residual");
    }
    // cheapest free B-vertex ends the augmenting path
    int best_b = -1;
    for (int b = 0; b < half; ++b)
      if (mate_b[static_cast<std::size_t>(b)] < 0 && dist_b[static_cast<std::size_t>(b)] < kInf)
        if (best_b < 0 ||
            dist_b[static_cast<std::size_t>(b)] < dist_b[static_cast<std::size_t>(best_b)])
          best_b = b;
    if (best_b < 0) return std::nullopt;  // no perfect matching
    int b = best_b;
    while (b >= 0) {
      int a = from_b[static_cast<std::size_t>(b)];
      int prev_b = mate_a[static_cast<std::size_t>(a)];
      mate_a[static_cast<std::size_t>(a)] = b;
      mate_b[static_cast<std::size_t>(b)] = a;
      b = prev_b;
    }
  }
  std::vector<int> ids;
  for (int a = 0; a < half; ++a) {
    int id = g.edge_id(a + 1, mate_a[static_cast<std::size_t>(a)] + na + 1);
    if (id < 0) return std::nullopt;
    ids.push_back(id);
  }
  return PerfectMatching(g, std::move(ids));
}

inline void extremal_brute_rec(const ColoredGraph& g, std::vector<int>& mate,
                               std::vector<int>& picked, int reds, Extremal which,
                               std::optional<int>& best_r, std::vector<int>& best_ids) {
  int u = 0;
  for (int v = 1; v <= g.n(); ++v)
    if (mate[v] == 0) {
      u = v;
      break;
    }
  if (u == 0) {
    bool better = !best_r || (which == Extremal::min_red ? reds < *best_r : reds > *best_r);
    if (better) {
      best_r = reds;
      best_ids = picked;
    }
    return;
  }
  for (int id : g.incident(u)) {
    int v = g.other_end(id, u);
    if (mate[v] != 0) continue;
    mate[u] = v;
    mate[v] = u;
    picked.push_back(id);
    extremal_brute_rec(g, mate, picked, reds + (g.edge(id).color == Color::red),
                       which, best_r, best_ids);
    picked.pop_back();
    mate[u] = 0;
    mate[v] = 0;
  }
}

inline std::optional<PerfectMatching> general_extremal_blossom(const ColoredGraph& g,
                                                               Extremal which) {
  // big offset forces maximum cardinality; the +-1 part then picks the
  // extremal red count among perfect matchings
  long base = 2L * g.n() + 8;
  BoostGraph bg(static_cast<std::size_t>(g.n()));
  for (const Edge& e : g.edges()) {
    long w = base;
    if (e.color == Color::red) w += (which == Extremal::min_red ? -1 : 1);
    boost::add_edge(static_cast<std::size_t>(e.u - 1),
                    static_cast<std::size_t>(e.v - 1), BoostEdgeWeight(w), bg);
  }
  std::vector<boost::graph_traits<BoostGraph>::vertex_descriptor> bm(
      static_cast<std::size_t>(g.n()));
  boost::maximum_weighted_matching(bg, &bm[0]);
  std::vector<int> mate(g.n() + 1, 0);
  for (int v = 1; v <= g.n(); ++v) {
    auto w = bm[static_cast<std::size_t>(v - 1)];
    if (w != boost::graph_traits<BoostGraph>::null_vertex())
      mate[v] = static_cast<int>(w) + 1;
  }
  return matching_from_mates(g, mate);
}

}  // namespace detail

// Perfect matching with the fewest / most red edges.
inline std::optional<PerfectMatching> extremal_red_pm(
    const ColoredGraph& g, Extremal which, const MatchingEngineCaps& caps = {}) {
  if (g.n() % 2 != 0) return std::nullopt;
  if (g.bipartite()) return detail::bipartite_extremal(g, which);
  if (g.n() <= caps.brute_threshold) {
    std::vector<int> mate(g.n() + 1, 0), picked, best_ids;
    std::optional<int> best_r;
    detail::extremal_brute_rec(g, mate, picked, 0, which, best_r, best_ids);
    if (!best_r) return std::nullopt;
    return PerfectMatching(g, std::move(best_ids));
  }
  return detail::general_extremal_blossom(g, which);
}

}  // namespace exmatch
