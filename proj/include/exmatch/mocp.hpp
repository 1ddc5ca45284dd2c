#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "exmatch/errors.hpp"

namespace exmatch {

struct Arc {
  int u;  // tail
  int v;  // head
  std::int64_t w;
};

// Directed graph, vertices 1..n. Parallel arcs and loops are permitted and
// distinguished by dense arc ids. Arc weights are integral and bounded so
// that 64-bit sums along walks cannot overflow.
class WeightedDigraph {
public:
  explicit WeightedDigraph(int n) : n_(n), out_(n + 1) {
    if (n < 1) throw InputError("digraph needs at least one vertex");
  }

  int add_arc(int u, int v, std::int64_t w) {
    check_vertex(u);
    check_vertex(v);
    if (w > (std::int64_t{1} << 31) || w < -(std::int64_t{1} << 31))
      throw InputError("arc weight exceeds 2^31");
    int id = static_cast<int>(arcs_.size());
    arcs_.push_back({u, v, w});
    out_[u].push_back(id);
    return id;
  }

  int n() const { return n_; }
  int m() const { return static_cast<int>(arcs_.size()); }
  const Arc& arc(int id) const { return arcs_[static_cast<std::size_t>(id)]; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<int>& out(int v) const {
    check_vertex(v);
    return out_[v];
  }

  std::vector<std::int64_t> weights() const {
    std::vector<std::int64_t> w(arcs_.size());
    for (std::size_t i = 0; i < arcs_.size(); ++i) w[i] = arcs_[i].w;
    return w;
  }

private:
  void check_vertex(int v) const {
    if (v < 1 || v > n_) throw InputError("vertex id out of range");
  }

  int n_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> out_;
};

// A walk is a chained arc sequence; closed when it returns to its start.
struct Walk {
  std::vector<int> arc_ids;

  int length() const { return static_cast<int>(arc_ids.size()); }
};

inline std::vector<int> walk_vertices(const WeightedDigraph& d, const Walk& z) {
  if (z.arc_ids.empty()) throw InputError("empty walk");
  std::vector<int> vs{d.arc(z.arc_ids[0]).u};
  for (int id : z.arc_ids) {
    if (d.arc(id).u != vs.back()) throw InputError("walk arcs do not chain");
    vs.push_back(d.arc(id).v);
  }
  return vs;
}

inline bool walk_closed(const WeightedDigraph& d, const Walk& z) {
  std::vector<int> vs = walk_vertices(d, z);
  return vs.front() == vs.back();
}

template <typename Container>
std::int64_t arc_weight_sum(const std::vector<std::int64_t>& w, const Container& ids) {
  std::int64_t s = 0;
  for (int id : ids) s += w[static_cast<std::size_t>(id)];
  return s;
}

// Simple directed cycle, stored so the arc sequence starts at its smallest
// vertex. A single loop arc is a cycle of length one.
struct DirectedCycle {
  std::vector<int> arc_ids;

  int length() const { return static_cast<int>(arc_ids.size()); }
};

namespace detail {

inline DirectedCycle canonical_dicycle(const WeightedDigraph& d, std::vector<int> arcs) {
  std::size_t lo = 0;
  for (std::size_t i = 1; i < arcs.size(); ++i)
    if (d.arc(arcs[i]).u < d.arc(arcs[lo]).u) lo = i;
  std::rotate(arcs.begin(), arcs.begin() + static_cast<std::ptrdiff_t>(lo), arcs.end());
  return DirectedCycle{std::move(arcs)};
}

}  // namespace detail

// Trims a closed odd-weight walk to a simple cycle of odd weight no heavier
// than the walk (weights must be non-negative). Splitting at the earliest
// vertex repetition cuts the walk into two closed parts whose weights sum to
// the whole, so exactly one part stays odd; recurse on that part.
// `ops` (optional) accumulates a basic-step count for complexity probes.
inline DirectedCycle extract_odd_cycle(const WeightedDigraph& d,
                                       const std::vector<std::int64_t>& w,
                                       const Walk& z, std::int64_t* ops = nullptr) {
  if (static_cast<int>(w.size()) != d.m())
    throw InputError("weight vector does not match digraph");
  if (!walk_closed(d, z)) throw InputError("walk is not closed");
  if (arc_weight_sum(w, z.arc_ids) % 2 == 0) throw InputError("walk weight is even");

  std::vector<int> cur = z.arc_ids;
  std::vector<int> last_pos(d.n() + 1, -1);
  std::int64_t steps = 0;
  for (;;) {
    std::size_t len = cur.size();
    // vertex sequence is tail(cur[0]), head(cur[0]), ..., head(cur[len-1])
    int start = d.arc(cur[0]).u;
    last_pos[start] = 0;
    std::vector<int> touched{start};
    std::size_t cut_i = 0, cut_j = len;
    for (std::size_t j = 1; j <= len; ++j) {
      ++steps;
      int vj = d.arc(cur[j - 1]).v;
      if (last_pos[vj] >= 0) {
        cut_i = static_cast<std::size_t>(last_pos[vj]);
        cut_j = j;
        break;
      }
      last_pos[vj] = static_cast<int>(j);
      touched.push_back(vj);
    }
    for (int v : touched) last_pos[v] = -1;
    if (d.arc(cur[cut_j - 1]).v == start && cut_i == 0 && cut_j == len &&
        cut_j - cut_i == len) {
      // no interior repetition: simple cycle
      if (ops) *ops += steps;
      return detail::canonical_dicycle(d, std::move(cur));
    }
    std::vector<int> inner(cur.begin() + static_cast<std::ptrdiff_t>(cut_i),
                           cur.begin() + static_cast<std::ptrdiff_t>(cut_j));
    if (arc_weight_sum(w, inner) % 2 != 0) {
      cur = std::move(inner);
    } else {
      cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(cut_i),
                cur.begin() + static_cast<std::ptrdiff_t>(cut_j));
    }
    if (cur.empty()) throw InputError("walk degenerated; weights inconsistent");
  }
}

// Minimum-weight closed odd walk through the given odd arc e = u->v, under
// non-negative weights: a shortest even-weight v->u walk avoiding e, found as
// a shortest path in the parity-layered double cover, with e appended.
inline std::optional<Walk> min_odd_closed_walk_through(
    const WeightedDigraph& d, const std::vector<std::int64_t>& w, int arc_id) {
  if (static_cast<int>(w.size()) != d.m())
    throw InputError("weight vector does not match digraph");
  if (arc_id < 0 || arc_id >= d.m()) throw InputError("arc id out of range");
  for (std::int64_t x : w)
    if (x < 0) throw InputError("negative weight");
  if (w[static_cast<std::size_t>(arc_id)] % 2 == 0)
    throw InputError("arc weight is even");
  const Arc& e = d.arc(arc_id);

  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  // node encoding: vertex * 2 + parity of the walk so far
  std::vector<std::int64_t> dist(2 * (d.n() + 1), kInf);
  std::vector<int> par_arc(2 * (d.n() + 1), -1);
  using Item = std::pair<std::int64_t, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  int src = e.v * 2, dst = e.u * 2;
  dist[src] = 0;
  pq.push({0, src});
  while (!pq.empty()) {
    auto [dv, node] = pq.top();
    pq.pop();
    if (dv != dist[node]) continue;
    int x = node / 2, layer = node % 2;
    for (int a : d.out(x)) {
      if (a == arc_id) continue;
      const Arc& arc = d.arc(a);
      std::int64_t wa = w[static_cast<std::size_t>(a)];
      int to = arc.v * 2 + (layer ^ static_cast<int>(wa & 1));
      std::int64_t nd = dv + wa;
      // parents only on strict improvement, so parent chains cannot cycle
      // through zero-weight ties; arcs are scanned in ascending id, which
      // settles equal-weight candidates toward the lowest arc id
      if (nd < dist[to]) {
        dist[to] = nd;
        par_arc[to] = a;
        pq.push({nd, to});
      }
    }
  }
  if (dist[dst] >= kInf) return std::nullopt;
  Walk z;
  int node = dst;
  while (par_arc[node] >= 0) {
    int a = par_arc[node];
    z.arc_ids.push_back(a);
    const Arc& arc = d.arc(a);
    node = arc.u * 2 + ((node % 2) ^ static_cast<int>(w[static_cast<std::size_t>(a)] & 1));
  }
  std::reverse(z.arc_ids.begin(), z.arc_ids.end());
  z.arc_ids.push_back(arc_id);
  return z;
}

struct MocpResult {
  DirectedCycle cycle;
  std::int64_t weight;
};

// Minimum odd-weight directed cycle under non-negative integral weights.
// Every odd cycle contains an odd arc, so scanning odd arcs in id order and
// trimming the best closed walk is exact.
inline std::optional<MocpResult> solve_mocp(const WeightedDigraph& d,
                                            const std::vector<std::int64_t>& w) {
  if (static_cast<int>(w.size()) != d.m())
    throw InputError("weight vector does not match digraph");
  for (std::int64_t x : w)
    if (x < 0) throw InputError("negative weight");
  std::optional<Walk> best;
  std::int64_t best_w = 0;
  for (int a = 0; a < d.m(); ++a) {
    if (w[static_cast<std::size_t>(a)] % 2 == 0) continue;
    std::optional<Walk> z = min_odd_closed_walk_through(d, w, a);
    if (!z) continue;
    std::int64_t zw = arc_weight_sum(w, z->arc_ids);
    if (!best || zw < best_w) {
      best = std::move(z);
      best_w = zw;
    }
  }
  if (!best) return std::nullopt;
  DirectedCycle c = extract_odd_cycle(d, w, *best);
  return MocpResult{std::move(c), best_w};
}

}  // namespace exmatch
