#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "exmatch/graph.hpp"
#include "exmatch/matching.hpp"
#include "exmatch/mocp.hpp"
#include "exmatch/oracles.hpp"

namespace exmatch {

// Orient a bipartite graph against a perfect matching: matched edges point
// A -> B, the rest B -> A, so directed cycles are exactly the alternating
// ones. Arc ids coincide with edge ids. Arc weights are edge weights
// relative to the matching.
inline WeightedDigraph orient_by_matching(const ColoredGraph& g,
                                          const PerfectMatching& m0) {
  if (!g.bipartite()) throw InputError("orientation needs a bipartition");
  WeightedDigraph d(g.n());
  for (int id = 0; id < g.m(); ++id) {
    const Edge& e = g.edge(id);
    int a = g.side_a(e.u) ? e.u : e.v;
    int b = (a == e.u) ? e.v : e.u;
    if (m0.has_edge(id))
      d.add_arc(a, b, edge_weight(g, m0, id));
    else
      d.add_arc(b, a, edge_weight(g, m0, id));
  }
  return d;
}

struct Reweighting {
  std::vector<std::int64_t> weights;    // non-negative, same cycle weights
  std::vector<std::int64_t> potential;  // per vertex
};

// Shift arc weights by shortest-walk potentials from a virtual source tied
// to every vertex with weight 0. Telescoping keeps every cycle weight
// intact; a negative cycle means the matching used for orientation was not
// red-minimum, which callers must rule out.
inline Reweighting reweight_nonnegative(const WeightedDigraph& d) {
  std::vector<std::int64_t> p(d.n() + 1, 0);
  for (int pass = 0; pass <= d.n(); ++pass) {
    bool changed = false;
    for (int a = 0; a < d.m(); ++a) {
      const Arc& arc = d.arc(a);
      if (p[arc.u] + arc.w < p[arc.v]) {
        p[arc.v] = p[arc.u] + arc.w;
        changed = true;
      }
    }
    if (!changed) break;
    if (pass == d.n()) throw InputError("negative cycle: matching not extremal");
  }
  Reweighting rw;
  rw.potential = p;
  rw.weights.resize(d.m());
  for (int a = 0; a < d.m(); ++a) {
    const Arc& arc = d.arc(a);
    rw.weights[static_cast<std::size_t>(a)] = arc.w + p[arc.u] - p[arc.v];
    if (rw.weights[static_cast<std::size_t>(a)] < 0)
      throw InputError("reweighting failed");
  }
  return rw;
}

// Perfect matching with red count at most k and congruent to k mod 2, on a
// bipartite graph. Start from the red-minimum matching; if its parity is
// off, the cheapest odd-weight alternating cycle fixes it when affordable.
// Targets above n/2 are lowered to the largest feasible value of the same
// parity, which keeps the answer set unchanged.
inline std::optional<PerfectMatching> solve_bcpm_bipartite(const ColoredGraph& g,
                                                           int k) {
  if (!g.bipartite()) throw InputError("bounded parity matching needs a bipartition");
  if (k < 0) return std::nullopt;
  int half = g.n() / 2;
  if (g.n() % 2 != 0) return std::nullopt;
  if (k > half) k = half - ((half - k) % 2 != 0 ? 1 : 0);
  if (k < 0) return std::nullopt;
  std::optional<PerfectMatching> m0 = extremal_red_pm(g, Extremal::min_red);
  if (!m0) return std::nullopt;
  int r0 = m0->red_count();
  if (r0 > k) return std::nullopt;
  if ((k - r0) % 2 == 0) return m0;
  WeightedDigraph d = orient_by_matching(g, *m0);
  Reweighting rw = reweight_nonnegative(d);
  std::optional<MocpResult> best = solve_mocp(d, rw.weights);
  if (!best) return std::nullopt;
  std::int64_t w0 = arc_weight_sum(d.weights(), best->cycle.arc_ids);
  if (w0 != best->weight) throw InputError("reweighting changed a cycle weight");
  if (w0 > k - r0) return std::nullopt;
  PerfectMatching m = toggle(g, *m0, best->cycle.arc_ids);
  if (m.red_count() != r0 + w0 || (m.red_count() - k) % 2 != 0 || m.red_count() > k)
    throw InputError("parity repair produced a wrong matching");
  return m;
}

// Reference implementation by enumeration; returns the qualifying matching
// with the most red edges (closest to the target).
inline std::optional<PerfectMatching> solve_bcpm_bruteforce(const ColoredGraph& g,
                                                            int k,
                                                            const OracleCaps& caps = {}) {
  if (k < 0) return std::nullopt;
  std::optional<std::vector<int>> best;
  int best_r = -1;
  for (const auto& ids : enumerate_pms(g, caps)) {
    int r = 0;
    for (int id : ids)
      if (g.edge(id).color == Color::red) ++r;
    if (r <= k && (k - r) % 2 == 0 && r > best_r) {
      best = ids;
      best_r = r;
    }
  }
  if (!best) return std::nullopt;
  return PerfectMatching(g, std::move(*best));
}

}  // namespace exmatch
