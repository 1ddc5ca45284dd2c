#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "exmatch/graph.hpp"
#include "exmatch/mocp.hpp"

// Exhaustive reference implementations. Deliberately written in the most
// obvious way possible and kept independent of the fast paths, so the two
// sides can disagree loudly in tests. Everything here is capped and throws
// BudgetError instead of silently truncating.

namespace exmatch {

struct OracleCaps {
  int max_vertices = 16;
  std::int64_t max_nodes = 20'000'000;
};

namespace detail {

inline void enumerate_pms_rec(const ColoredGraph& g, std::vector<int>& mate,
                              std::vector<int>& picked, const OracleCaps& caps,
                              std::int64_t& nodes,
                              std::vector<std::vector<int>>& out) {
  int u = 0;
  for (int v = 1; v <= g.n(); ++v)
    if (mate[v] == 0) {
      u = v;
      break;
    }
  if (u == 0) {
    out.push_back(picked);
    return;
  }
  for (int id : g.incident(u)) {
    int v = g.other_end(id, u);
    if (mate[v] != 0 || v == u) continue;
    if (++nodes > caps.max_nodes) throw BudgetError("matching enumeration cap hit");
    mate[u] = v;
    mate[v] = u;
    picked.push_back(id);
    enumerate_pms_rec(g, mate, picked, caps, nodes, out);
    picked.pop_back();
    mate[u] = 0;
    mate[v] = 0;
  }
}

}  // namespace detail

// All perfect matchings as sorted edge-id sets, lowest-free-vertex-first
// enumeration order.
inline std::vector<std::vector<int>> enumerate_pms(const ColoredGraph& g,
                                                   const OracleCaps& caps = {}) {
  if (g.n() > caps.max_vertices) throw BudgetError("graph too large to enumerate");
  std::vector<std::vector<int>> out;
  if (g.n() % 2 != 0) return out;
  std::vector<int> mate(g.n() + 1, 0), picked;
  std::int64_t nodes = 0;
  detail::enumerate_pms_rec(g, mate, picked, caps, nodes, out);
  for (auto& ids : out) std::sort(ids.begin(), ids.end());
  return out;
}

enum class Problem {
  exact_red,     // perfect matching with exactly k red edges
  bounded_parity_red,  // red count at most k and congruent to k mod 2
  parity_red,    // red count congruent to k mod 2
};

struct BruteDecision {
  bool yes = false;
  std::optional<std::vector<int>> witness;  // edge ids of some satisfying PM
};

inline BruteDecision brute_decide(Problem p, const ColoredGraph& g, int k,
                                  const OracleCaps& caps = {}) {
  BruteDecision d;
  for (const auto& ids : enumerate_pms(g, caps)) {
    int r = 0;
    for (int id : ids)
      if (g.edge(id).color == Color::red) ++r;
    bool ok = false;
    switch (p) {
      case Problem::exact_red: ok = (r == k); break;
      case Problem::bounded_parity_red: ok = (r <= k && (r - k) % 2 == 0); break;
      case Problem::parity_red: ok = ((r - k) % 2 == 0); break;
    }
    if (ok) {
      d.yes = true;
      d.witness = ids;
      return d;
    }
  }
  return d;
}

namespace detail {

inline void dicycles_rec(const WeightedDigraph& d, int s, int v,
                         std::vector<bool>& used, std::vector<int>& arcs,
                         const OracleCaps& caps, std::int64_t& nodes,
                         const std::vector<std::int64_t>& w,
                         std::optional<std::int64_t>& best_odd,
                         std::vector<int>& best_arcs, std::int64_t acc) {
  for (int a : d.out(v)) {
    const Arc& arc = d.arc(a);
    if (arc.v < s) continue;  // canonical: smallest vertex on the cycle is s
    if (++nodes > caps.max_nodes) throw BudgetError("cycle enumeration cap hit");
    if (arc.v == s) {
      std::int64_t cw = acc + w[static_cast<std::size_t>(a)];
      if (cw % 2 != 0 && (!best_odd || cw < *best_odd)) {
        best_odd = cw;
        best_arcs = arcs;
        best_arcs.push_back(a);
      }
      continue;
    }
    if (used[arc.v]) continue;
    used[arc.v] = true;
    arcs.push_back(a);
    dicycles_rec(d, s, arc.v, used, arcs, caps, nodes, w, best_odd, best_arcs,
                 acc + w[static_cast<std::size_t>(a)]);
    arcs.pop_back();
    used[arc.v] = false;
  }
}

}  // namespace detail

// Minimum odd-weight simple directed cycle by full enumeration.
inline std::optional<MocpResult> brute_mocp(const WeightedDigraph& d,
                                            const std::vector<std::int64_t>& w,
                                            const OracleCaps& caps = {}) {
  if (static_cast<int>(w.size()) != d.m())
    throw InputError("weight vector does not match digraph");
  std::optional<std::int64_t> best;
  std::vector<int> best_arcs;
  std::int64_t nodes = 0;
  for (int s = 1; s <= d.n(); ++s) {
    std::vector<bool> used(d.n() + 1, false);
    used[s] = true;
    std::vector<int> arcs;
    detail::dicycles_rec(d, s, s, used, arcs, caps, nodes, w, best, best_arcs, 0);
  }
  if (!best) return std::nullopt;
  return MocpResult{detail::canonical_dicycle(d, std::move(best_arcs)), *best};
}

enum class IndependenceKind { whole_graph, balanced_bipartite };

namespace detail {

inline int mis_rec(const std::vector<std::uint32_t>& nbr, std::uint32_t cand) {
  if (cand == 0) return 0;
  int v = std::countr_zero(cand);
  std::uint32_t without = cand & (cand - 1);
  int skip = mis_rec(nbr, without);
  int take = 1 + mis_rec(nbr, without & ~nbr[static_cast<std::size_t>(v)]);
  return take > skip ? take : skip;
}

}  // namespace detail

// whole_graph: maximum independent set size. balanced_bipartite: the largest
// s such that both sides contain s vertices with no edge between the two
// chosen groups (0 whenever every A-subset dominates B, e.g. complete
// bipartite graphs).
inline int brute_independence(const ColoredGraph& g, IndependenceKind kind) {
  if (kind == IndependenceKind::whole_graph) {
    if (g.n() > 20) throw BudgetError("independence number: graph too large");
    std::vector<std::uint32_t> nbr(g.n(), 0);
    for (const Edge& e : g.edges()) {
      nbr[static_cast<std::size_t>(e.u - 1)] |= std::uint32_t{1} << (e.v - 1);
      nbr[static_cast<std::size_t>(e.v - 1)] |= std::uint32_t{1} << (e.u - 1);
    }
    std::uint32_t all = (std::uint32_t{1} << g.n()) - 1;
    return detail::mis_rec(nbr, all);
  }
  if (!g.bipartite()) throw InputError("balanced independence needs a bipartition");
  int na = g.side_a_count(), nb = g.n() - na;
  if (na > 20) throw BudgetError("balanced independence: side too large");
  // nb_mask[S] = union of B-neighbourhoods over the A-subset S
  std::vector<std::uint64_t> touched(std::size_t{1} << na, 0);
  std::vector<std::uint64_t> single(static_cast<std::size_t>(na), 0);
  for (const Edge& e : g.edges()) {
    int a = e.u <= na ? e.u : e.v;
    int b = e.u <= na ? e.v : e.u;
    single[static_cast<std::size_t>(a - 1)] |= std::uint64_t{1} << (b - na - 1);
  }
  int best = 0;
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << na); ++s) {
    std::uint64_t low = s & (~s + 1);
    touched[s] = touched[s ^ low] | single[static_cast<std::size_t>(std::countr_zero(low))];
    int free_b = nb - std::popcount(touched[s]);
    int sz = std::popcount(s);
    int val = sz < free_b ? sz : free_b;
    if (val > best) best = val;
  }
  return best;
}

}  // namespace exmatch
