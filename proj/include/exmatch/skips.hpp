#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "exmatch/errors.hpp"
#include "exmatch/graph.hpp"

namespace exmatch {

// Open alternating walk on distinct vertices; verts[i] -- verts[i+1] is edge_ids[i].
struct AltPath {
  std::vector<int> verts;
  std::vector<int> edge_ids;

  int length() const { return static_cast<int>(edge_ids.size()); }
};

inline AltPath make_alt_path(std::pair<std::vector<int>, std::vector<int>> vp) {
  return AltPath{std::move(vp.first), std::move(vp.second)};
}

namespace detail {

inline void check_alt_path(const ColoredGraph& g, const PerfectMatching& m, const AltPath& p) {
  if (p.edge_ids.empty() || p.verts.size() != p.edge_ids.size() + 1)
    throw InputError("malformed alternating path");
  for (std::size_t i = 0; i < p.edge_ids.size(); ++i) {
    int id = p.edge_ids[i];
    if (id < 0 || id >= g.m()) throw InputError("path edge id out of range");
    const Edge& e = g.edge(id);
    int u = p.verts[i], v = p.verts[i + 1];
    if (!((e.u == u && e.v == v) || (e.u == v && e.v == u)))
      throw InputError("path edges do not chain through its vertices");
    if (i > 0 && m.has_edge(id) == m.has_edge(p.edge_ids[i - 1]))
      throw InputError("path is not alternating");
  }
  std::vector<int> vs = p.verts;
  std::sort(vs.begin(), vs.end());
  if (std::adjacent_find(vs.begin(), vs.end()) != vs.end())
    throw InputError("path repeats a vertex");
}

inline int path_arc_weight(const ColoredGraph& g, const PerfectMatching& m, const AltPath& p,
                           int i, int j) {
  int w = 0;
  for (int x = i; x < j; ++x) w += edge_weight(g, m, p.edge_ids[x]);
  return w;
}

inline bool cycle_has_edge(const AlternatingCycle& c, int id) {
  for (int e : c.edge_ids)
    if (e == id) return true;
  return false;
}

inline int cyc_off(int from, int to, int len) { return ((to - from) % len + len) % len; }

// Weight of the forward arc starting at position i and spanning `steps` edges.
inline int cycle_arc_weight(const ColoredGraph& g, const PerfectMatching& m,
                            const AlternatingCycle& c, int i, int steps) {
  int len = c.length();
  int w = 0;
  for (int x = 0; x < steps; ++x) w += edge_weight(g, m, c.edge_ids[(i + x) % len]);
  return w;
}

}  // namespace detail

enum class SkipMode : std::uint8_t { alpha, beta };
enum class SkipSign : std::uint8_t { negative, positive };
enum class SkipKind : std::uint8_t { chord_pair, split_pair, split_single };

// Chord surgery on one alternating cycle. The two arcs [a..b] and [c..d]
// (forward, position indices into the host cycle, or into a path if
// cycle < 0) are removed and replaced by non-matching chords, shortening the
// cycle while changing its weight by at most 4 in absolute value.
//   chord_pair:   one shorter cycle; e1 = (V[a],V[c]), e2 = (V[b],V[d])
//   split_pair:   two shorter cycles; e1 = (V[a],V[d]) closes the outer one,
//                 e2 = (V[b],V[c]) the inner one
//   split_single: one shorter cycle; single chord e1 = (V[a],V[b]), positions
//                 c, d and e2 unused
// Junction edges (leaving a, entering b, leaving c, entering d) must be
// non-matching; with the cycle alternating this forces both dropped arcs to
// be odd, so the replacement alternates too.
struct Skip {
  int cycle = -1;  // host index inside an AlternatingCycleSet, -1 = path-relative
  SkipKind kind = SkipKind::chord_pair;
  int a = -1, b = -1, c = -1, d = -1;
  int e1 = -1, e2 = -1;
  int weight = 0;  // w(replacement) - w(host), always in [-4, 4]
  int shrink = 0;  // edge count removed, always positive (and even)
  int span_from = 0, span_len = 0;  // positions [span_from .. span_from+span_len] touched
};

struct SkipCycleSet {
  std::vector<Skip> skips;
  std::vector<int> cycles;  // indices of whole cycles to remove from the symmetric difference

  bool empty() const { return skips.empty() && cycles.empty(); }
};

namespace detail {

// Cyclic intervals [f1..f1+l1] and [f2..f2+l2] (vertex positions mod len) intersect?
inline bool spans_overlap(int len, int f1, int l1, int f2, int l2) {
  return detail::cyc_off(f1, f2, len) <= l1 || detail::cyc_off(f2, f1, len) <= l2;
}

inline bool skip_order_lt(const Skip& x, const Skip& y) {
  if (x.e1 != y.e1) return x.e1 < y.e1;
  if (x.e2 != y.e2) return x.e2 < y.e2;
  if (x.kind != y.kind) return static_cast<int>(x.kind) < static_cast<int>(y.kind);
  return x.a < y.a;
}

}  // namespace detail

// Builds and fully checks a skip on a cycle; nullopt when any condition fails.
inline std::optional<Skip> make_cycle_skip(const ColoredGraph& g, const PerfectMatching& m,
                                           const AlternatingCycle& c, SkipKind kind, int a, int b,
                                           int cc, int dd, int cycle_index = -1) {
  int len = c.length();
  auto pos_ok = [&](int p) { return p >= 0 && p < len; };
  if (!pos_ok(a) || !pos_ok(b)) return std::nullopt;
  bool single = kind == SkipKind::split_single;
  if (!single && (!pos_ok(cc) || !pos_ok(dd))) return std::nullopt;

  int ob = detail::cyc_off(a, b, len);
  int oc = single ? 0 : detail::cyc_off(a, cc, len);
  int od = single ? 0 : detail::cyc_off(a, dd, len);
  if (ob == 0) return std::nullopt;
  if (!single && !(ob < oc && oc < od)) return std::nullopt;

  auto nonmatching = [&](int pos) { return !m.has_edge(c.edge_ids[((pos % len) + len) % len]); };
  // junction conditions: the kept neighbours of every junction stay matching
  if (!nonmatching(a) || !nonmatching(b - 1)) return std::nullopt;
  if (!single && (!nonmatching(cc) || !nonmatching(dd - 1))) return std::nullopt;

  auto chord = [&](int p, int q) -> int {
    int id = g.edge_id(c.verts[p], c.verts[q]);
    if (id < 0 || detail::cycle_has_edge(c, id) || m.has_edge(id)) return -1;
    return id;
  };

  Skip s;
  s.cycle = cycle_index;
  s.kind = kind;
  s.a = a;
  s.b = b;
  s.c = single ? -1 : cc;
  s.d = single ? -1 : dd;
  int arc1 = detail::cycle_arc_weight(g, m, c, a, ob);
  if (kind == SkipKind::chord_pair) {
    s.e1 = chord(a, cc);
    s.e2 = chord(b, dd);
    if (s.e1 < 0 || s.e2 < 0 || s.e1 == s.e2) return std::nullopt;
    s.weight = edge_weight(g, m, s.e1) + edge_weight(g, m, s.e2) - arc1 -
               detail::cycle_arc_weight(g, m, c, cc, od - oc);
    s.shrink = ob + (od - oc) - 2;
    if (len - s.shrink < 4) return std::nullopt;
  } else if (kind == SkipKind::split_pair) {
    s.e1 = chord(a, dd);
    s.e2 = chord(b, cc);
    if (s.e1 < 0 || s.e2 < 0 || s.e1 == s.e2) return std::nullopt;
    s.weight = edge_weight(g, m, s.e1) + edge_weight(g, m, s.e2) - arc1 -
               detail::cycle_arc_weight(g, m, c, cc, od - oc);
    s.shrink = ob + (od - oc) - 2;
    if (len - od + 1 < 4 || oc - ob + 1 < 4) return std::nullopt;
  } else {
    s.e1 = chord(a, b);
    if (s.e1 < 0) return std::nullopt;
    s.weight = edge_weight(g, m, s.e1) - arc1;
    s.shrink = ob - 1;
    if (len - ob + 1 < 4) return std::nullopt;
  }
  if (s.shrink <= 0 || s.weight < -4 || s.weight > 4) return std::nullopt;
  s.span_from = a;
  s.span_len = single ? ob : od;
  return s;
}

// Re-derives the skip from its stored positions and compares; guards against
// stale skips applied after the host set changed.
inline bool skip_valid(const ColoredGraph& g, const PerfectMatching& m, const AlternatingCycle& c,
                       const Skip& s) {
  auto fresh = make_cycle_skip(g, m, c, s.kind, s.a, s.b, s.c, s.d, s.cycle);
  return fresh && fresh->e1 == s.e1 && fresh->e2 == s.e2 && fresh->weight == s.weight &&
         fresh->shrink == s.shrink && fresh->span_from == s.span_from &&
         fresh->span_len == s.span_len;
}

// All skips on one cycle, deterministic order. alpha: single-cycle rewires
// only (crossing chord pairs, two junction assignments each). beta: the two
// splitting kinds (each chord alone in both orientations, nested and sibling
// chord pairs).
inline std::vector<Skip> enumerate_skips(const ColoredGraph& g, const PerfectMatching& m,
                                         const AlternatingCycle& c, SkipMode mode,
                                         int cycle_index = -1) {
  int len = c.length();
  std::vector<std::array<int, 2>> chords;
  for (int p = 0; p < len; ++p)
    for (int q = p + 1; q < len; ++q) {
      int id = g.edge_id(c.verts[p], c.verts[q]);
      if (id >= 0 && !detail::cycle_has_edge(c, id) && !m.has_edge(id))
        chords.push_back({p, q});
    }

  std::vector<Skip> out;
  auto add = [&](std::optional<Skip> s) {
    if (s) out.push_back(*s);
  };

  if (mode == SkipMode::alpha) {
    for (std::size_t i = 0; i < chords.size(); ++i)
      for (std::size_t j = i + 1; j < chords.size(); ++j) {
        int x1 = chords[i][0], y1 = chords[i][1], x2 = chords[j][0], y2 = chords[j][1];
        bool cross = (x1 < x2 && x2 < y1 && y1 < y2) || (x2 < x1 && x1 < y2 && y2 < y1);
        if (!cross) continue;
        int p0 = std::min(x1, x2), p3 = std::max(y1, y2);
        int p1 = std::max(x1, x2), p2 = std::min(y1, y2);
        add(make_cycle_skip(g, m, c, SkipKind::chord_pair, p0, p1, p2, p3, cycle_index));
        add(make_cycle_skip(g, m, c, SkipKind::chord_pair, p1, p2, p3, p0, cycle_index));
      }
  } else {
    for (const auto& ch : chords) {
      add(make_cycle_skip(g, m, c, SkipKind::split_single, ch[0], ch[1], -1, -1, cycle_index));
      add(make_cycle_skip(g, m, c, SkipKind::split_single, ch[1], ch[0], -1, -1, cycle_index));
    }
    for (std::size_t i = 0; i < chords.size(); ++i)
      for (std::size_t j = 0; j < chords.size(); ++j) {
        if (i == j) continue;
        int x1 = chords[i][0], y1 = chords[i][1], x2 = chords[j][0], y2 = chords[j][1];
        if (x1 < x2 && y2 < y1)  // nested: outer chord i, inner chord j
          add(make_cycle_skip(g, m, c, SkipKind::split_pair, x1, x2, y2, y1, cycle_index));
        if (y1 < x2)  // sibling: chord i closes the wrapped-around cycle
          add(make_cycle_skip(g, m, c, SkipKind::split_pair, y1, x2, y2, x1, cycle_index));
      }
  }
  std::sort(out.begin(), out.end(), detail::skip_order_lt);
  return out;
}

inline std::vector<Skip> enumerate_skips(const ColoredGraph& g, const AlternatingCycleSet& cycles,
                                         int cycle_index, SkipMode mode) {
  return enumerate_skips(g, cycles.base(), cycles.cycle(cycle_index), mode, cycle_index);
}

// Edge lists of the cycle(s) replacing the host after applying the skip.
inline std::vector<std::vector<int>> skip_replacement(const AlternatingCycle& c, const Skip& s) {
  int len = c.length();
  auto arc = [&](int from, int steps) {
    std::vector<int> ids;
    for (int x = 0; x < steps; ++x) ids.push_back(c.edge_ids[(from + x) % len]);
    return ids;
  };
  int ob = detail::cyc_off(s.a, s.b, len);
  if (s.kind == SkipKind::split_single) {
    std::vector<int> c1 = arc(s.b, len - ob);
    c1.push_back(s.e1);
    return {c1};
  }
  int oc = detail::cyc_off(s.a, s.c, len), od = detail::cyc_off(s.a, s.d, len);
  if (s.kind == SkipKind::chord_pair) {
    std::vector<int> c1 = arc(s.b, oc - ob);
    c1.push_back(s.e1);
    std::vector<int> back = arc(s.d, len - od);
    c1.insert(c1.end(), back.begin(), back.end());
    c1.push_back(s.e2);
    return {c1};
  }
  std::vector<int> c1 = arc(s.d, len - od);
  c1.push_back(s.e1);
  std::vector<int> c2 = arc(s.b, oc - ob);
  c2.push_back(s.e2);
  return {c1, c2};
}

inline std::int64_t skip_cycle_set_weight(const ColoredGraph& g, const AlternatingCycleSet& cycles,
                                          const SkipCycleSet& set) {
  std::int64_t w = 0;
  for (const Skip& s : set.skips) w += s.weight;
  for (int ci : set.cycles) w -= cycles.cycle_weight(g, ci);
  return w;
}

struct SurgeryResult {
  AlternatingCycleSet cycles;
  PerfectMatching other;
};

// Applies every skip and removes every listed cycle in one toggle of the far
// matching. Everything is re-validated against the current set first; a skip
// or cycle index that no longer matches reality is an input error.
inline SurgeryResult use_skip_cycle_set(const ColoredGraph& g, const AlternatingCycleSet& cycles,
                                        const PerfectMatching& other, const SkipCycleSet& set) {
  if (set.empty()) throw InputError("empty skip-cycle set");
  const PerfectMatching& base = cycles.base();

  std::vector<std::vector<const Skip*>> per_cycle(cycles.count());
  for (const Skip& s : set.skips) {
    if (s.cycle < 0 || s.cycle >= cycles.count()) throw InputError("skip host out of range");
    if (!skip_valid(g, base, cycles.cycle(s.cycle), s)) throw InputError("stale skip");
    per_cycle[s.cycle].push_back(&s);
  }
  for (const auto& group : per_cycle)
    for (std::size_t i = 0; i < group.size(); ++i)
      for (std::size_t j = i + 1; j < group.size(); ++j) {
        int len = cycles.cycle(group[i]->cycle).length();
        if (detail::spans_overlap(len, group[i]->span_from, group[i]->span_len,
                                  group[j]->span_from, group[j]->span_len))
          throw InputError("overlapping skips");
      }
  std::vector<char> removed(cycles.count(), 0);
  for (int ci : set.cycles) {
    if (ci < 0 || ci >= cycles.count()) throw InputError("cycle index out of range");
    if (removed[ci]) throw InputError("cycle removed twice");
    if (!per_cycle[ci].empty()) throw InputError("cycle both removed and rewired");
    removed[ci] = 1;
  }

  // flip set = dropped arcs + chords of every skip, plus all removed cycles
  std::vector<int> flip;
  std::int64_t expect_shrink = 0;
  for (const Skip& s : set.skips) {
    const AlternatingCycle& c = cycles.cycle(s.cycle);
    int len = c.length();
    int ob = detail::cyc_off(s.a, s.b, len);
    for (int x = 0; x < ob; ++x) flip.push_back(c.edge_ids[(s.a + x) % len]);
    flip.push_back(s.e1);
    if (s.kind != SkipKind::split_single) {
      int oc = detail::cyc_off(s.a, s.c, len), od = detail::cyc_off(s.a, s.d, len);
      for (int x = 0; x < od - oc; ++x) flip.push_back(c.edge_ids[(s.c + x) % len]);
      flip.push_back(s.e2);
    }
    expect_shrink += s.shrink;
  }
  for (int ci = 0; ci < cycles.count(); ++ci)
    if (removed[ci]) {
      const auto& ids = cycles.cycle(ci).edge_ids;
      flip.insert(flip.end(), ids.begin(), ids.end());
      expect_shrink += cycles.cycle(ci).length();
    }

  PerfectMatching next = toggle(g, other, flip);
  std::int64_t delta = static_cast<std::int64_t>(next.red_count()) - other.red_count();
  if (delta != skip_cycle_set_weight(g, cycles, set))
    throw InputError("surgery changed the red count by the wrong amount");
  AlternatingCycleSet rebuilt(g, base, next);
  if (rebuilt.total_edges() != cycles.total_edges() - expect_shrink)
    throw InputError("surgery did not shrink the symmetric difference as expected");
  return SurgeryResult{std::move(rebuilt), std::move(next)};
}

inline SurgeryResult use_skip(const ColoredGraph& g, const AlternatingCycleSet& cycles,
                              const PerfectMatching& other, const Skip& s) {
  SkipCycleSet set;
  set.skips.push_back(s);
  return use_skip_cycle_set(g, cycles, other, set);
}

// --- pair / bundle scan over an alternating path -----------------------------

struct EdgePair {
  int pos;     // path edge index of the matching edge; the pair is edges pos, pos+1
  int weight;  // in {-1, 0, 1}
};

struct Bundle {
  int first, second;  // indices into PairScan::pairs; equal nonzero weight sign,
                      // only zero-weight pairs in between
};

struct PairScan {
  std::vector<EdgePair> pairs;
  std::vector<int> nonzero;        // indices of nonzero-weight pairs, in path order
  std::vector<Bundle> plus_bundles;   // maximal set of disjoint +1 bundles
  std::vector<Bundle> minus_bundles;  // maximal set of disjoint -1 bundles
  std::vector<std::pair<int, int>> sap_segments;  // maximal bundle-free pair ranges, inclusive
};

inline PairScan scan_pairs_bundles(const ColoredGraph& g, const PerfectMatching& m,
                                   const AltPath& p) {
  detail::check_alt_path(g, m, p);
  PairScan s;
  int ne = p.length();
  int start = m.has_edge(p.edge_ids[0]) ? 0 : 1;
  for (int i = start; i + 1 < ne; i += 2)
    s.pairs.push_back(
        {i, edge_weight(g, m, p.edge_ids[i]) + edge_weight(g, m, p.edge_ids[i + 1])});
  for (int i = 0; i < static_cast<int>(s.pairs.size()); ++i)
    if (s.pairs[i].weight != 0) s.nonzero.push_back(i);

  // greedy pairing inside each maximal same-sign run of the nonzero subsequence
  std::size_t i = 0;
  while (i < s.nonzero.size()) {
    std::size_t j = i;
    while (j + 1 < s.nonzero.size() &&
           s.pairs[s.nonzero[j + 1]].weight == s.pairs[s.nonzero[i]].weight)
      ++j;
    for (std::size_t x = i; x + 1 <= j; x += 2) {
      Bundle b{s.nonzero[x], s.nonzero[x + 1]};
      (s.pairs[s.nonzero[i]].weight > 0 ? s.plus_bundles : s.minus_bundles).push_back(b);
    }
    i = j + 1;
  }

  // a segment is bundle-free iff it contains no two same-sign pairs that are
  // adjacent in the nonzero subsequence
  int seg_start = 0;
  for (std::size_t x = 0; x + 1 < s.nonzero.size(); ++x)
    if (s.pairs[s.nonzero[x]].weight == s.pairs[s.nonzero[x + 1]].weight) {
      s.sap_segments.push_back({seg_start, s.nonzero[x + 1] - 1});
      seg_start = s.nonzero[x] + 1;
    }
  if (!s.pairs.empty()) s.sap_segments.push_back({seg_start, static_cast<int>(s.pairs.size()) - 1});
  return s;
}

// --- skips built on a path (host cycle not yet bound) ------------------------

// Positions are vertex indices into the path; dropped arcs are [a..b] and
// [c..d] as on cycles, but nothing may wrap.
inline std::optional<Skip> make_path_skip(const ColoredGraph& g, const PerfectMatching& m,
                                          const AltPath& p, SkipKind kind, int a, int b, int cc,
                                          int dd) {
  int nv = static_cast<int>(p.verts.size());
  bool single = kind == SkipKind::split_single;
  if (a < 0 || b >= nv || a >= b) return std::nullopt;
  if (!single && !(b < cc && cc < dd && dd < nv)) return std::nullopt;

  auto nonmatching = [&](int eidx) { return !m.has_edge(p.edge_ids[eidx]); };
  if (!nonmatching(a) || !nonmatching(b - 1)) return std::nullopt;
  if (!single && (!nonmatching(cc) || !nonmatching(dd - 1))) return std::nullopt;

  auto chord = [&](int x, int y) -> int {
    int id = g.edge_id(p.verts[x], p.verts[y]);
    if (id < 0 || m.has_edge(id)) return -1;
    for (int e : p.edge_ids)
      if (e == id) return -1;
    return id;
  };

  Skip s;
  s.cycle = -1;
  s.kind = kind;
  s.a = a;
  s.b = b;
  s.c = single ? -1 : cc;
  s.d = single ? -1 : dd;
  int arc1 = detail::path_arc_weight(g, m, p, a, b);
  if (kind == SkipKind::chord_pair) {
    s.e1 = chord(a, cc);
    s.e2 = chord(b, dd);
    if (s.e1 < 0 || s.e2 < 0 || s.e1 == s.e2) return std::nullopt;
    s.weight = edge_weight(g, m, s.e1) + edge_weight(g, m, s.e2) - arc1 -
               detail::path_arc_weight(g, m, p, cc, dd);
    s.shrink = (b - a) + (dd - cc) - 2;
  } else if (kind == SkipKind::split_pair) {
    s.e1 = chord(a, dd);
    s.e2 = chord(b, cc);
    if (s.e1 < 0 || s.e2 < 0 || s.e1 == s.e2) return std::nullopt;
    s.weight = edge_weight(g, m, s.e1) + edge_weight(g, m, s.e2) - arc1 -
               detail::path_arc_weight(g, m, p, cc, dd);
    s.shrink = (b - a) + (dd - cc) - 2;
    if (cc - b + 1 < 4) return std::nullopt;
  } else {
    s.e1 = chord(a, b);
    if (s.e1 < 0) return std::nullopt;
    s.weight = edge_weight(g, m, s.e1) - arc1;
    s.shrink = (b - a) - 1;
  }
  if (s.shrink <= 0 || s.weight < -4 || s.weight > 4) return std::nullopt;
  s.span_from = a;
  s.span_len = (single ? b : dd) - a;
  return s;
}

// Rebinds a path-relative skip onto the cycle the path was cut from;
// path_start is the cycle position of path vertex 0. Returns the fully
// validated cycle skip.
inline std::optional<Skip> bind_path_skip(const ColoredGraph& g, const AlternatingCycleSet& cycles,
                                          int cycle_index, int path_start, const Skip& s) {
  const AlternatingCycle& c = cycles.cycle(cycle_index);
  int len = c.length();
  auto rel = [&](int p) { return p < 0 ? -1 : (path_start + p) % len; };
  auto bound = make_cycle_skip(g, cycles.base(), c, s.kind, rel(s.a), rel(s.b), rel(s.c), rel(s.d),
                               cycle_index);
  if (bound && bound->e1 == s.e1 && bound->e2 == s.e2 && bound->weight == s.weight) return bound;
  return std::nullopt;
}

// Finds up to t pairwise disjoint skips of the requested weight sign on an
// alternating path. Bundles of matching/non-matching edge pairs are located
// first; every block of threshold_scale consecutive bundles is guaranteed to
// host one skip when the graph is complete, and is swept exhaustively
// otherwise. Disjointness comes from the blocks being disjoint.
inline std::vector<Skip> find_signed_skips(const ColoredGraph& g, const PerfectMatching& m,
                                           const AltPath& path, int t, SkipSign sign,
                                           int threshold_scale, SkipMode mode = SkipMode::alpha,
                                           long long sweep_budget = 4'000'000) {
  PairScan scan = scan_pairs_bundles(g, m, path);
  const auto& bundles =
      sign == SkipSign::negative ? scan.plus_bundles : scan.minus_bundles;
  int block = std::max(1, threshold_scale);
  int nblocks = static_cast<int>(bundles.size()) / block;

  std::vector<Skip> out;
  for (int bi = 0; bi < nblocks && static_cast<int>(out.size()) < t; ++bi) {
    // trimmed bundle sub-paths: non-matching edge of the first pair through
    // the non-matching edge of the second; they share a weight of +2 (-1)
    std::vector<std::pair<int, int>> subs;  // vertex ranges [from..to]
    for (int x = bi * block; x < (bi + 1) * block; ++x)
      subs.push_back({scan.pairs[bundles[x].first].pos + 1,
                      scan.pairs[bundles[x].second].pos + 2});

    std::vector<Skip> cand;
    auto consider = [&](std::optional<Skip> s) {
      if (!s) return;
      if (sign == SkipSign::negative ? s->weight < 0 : s->weight > 0) cand.push_back(*s);
    };

    for (std::size_t x = 0; x < subs.size(); ++x) {
      if (mode == SkipMode::beta)
        consider(make_path_skip(g, m, path, SkipKind::split_single, subs[x].first, subs[x].second,
                                -1, -1));
      for (std::size_t y = x + 1; y < subs.size(); ++y)
        consider(make_path_skip(g, m, path,
                                mode == SkipMode::alpha ? SkipKind::chord_pair
                                                        : SkipKind::split_pair,
                                subs[x].first, subs[x].second, subs[y].first, subs[y].second));
    }

    if (cand.empty()) {
      // fall back to sweeping every chord combination inside the block's span
      int lo = subs.front().first, hi = subs.back().second;
      std::vector<std::array<int, 2>> chords;
      for (int p = lo; p <= hi && sweep_budget > 0; ++p)
        for (int q = p + 1; q <= hi; ++q, --sweep_budget)
          if (g.edge_id(path.verts[p], path.verts[q]) >= 0) chords.push_back({p, q});
      if (mode == SkipMode::beta)
        for (const auto& ch : chords) {
          if (--sweep_budget < 0) break;
          consider(make_path_skip(g, m, path, SkipKind::split_single, ch[0], ch[1], -1, -1));
        }
      for (std::size_t i = 0; i < chords.size() && sweep_budget > 0; ++i)
        for (std::size_t j = 0; j < chords.size() && sweep_budget > 0; ++j, --sweep_budget) {
          if (i == j) continue;
          int x1 = chords[i][0], y1 = chords[i][1], x2 = chords[j][0], y2 = chords[j][1];
          if (mode == SkipMode::alpha) {
            if (i < j && x1 < x2 && x2 < y1 && y1 < y2)
              consider(make_path_skip(g, m, path, SkipKind::chord_pair, x1, x2, y1, y2));
          } else {
            if (x1 < x2 && y2 < y1)  // nested only: sibling shapes need a wrap
              consider(make_path_skip(g, m, path, SkipKind::split_pair, x1, x2, y2, y1));
          }
        }
    }

    if (!cand.empty()) {
      std::sort(cand.begin(), cand.end(), detail::skip_order_lt);
      out.push_back(cand.front());
    }
  }
  return out;
}

// --- zero-weight skip-cycle sets ---------------------------------------------

struct ZeroSetSearch {
  std::optional<SkipCycleSet> set;
  bool budget_exceeded = false;
};

namespace detail {

// Largest pairwise-disjoint subset of equal-weight skips on one cycle,
// greedy by span end; wrap-around spans are appended only when still disjoint.
inline std::vector<Skip> schedule_disjoint(int len, std::vector<Skip> skips) {
  std::vector<Skip> plain, wrap;
  for (Skip& s : skips)
    (s.span_from + s.span_len < len ? plain : wrap).push_back(s);
  std::sort(plain.begin(), plain.end(), [](const Skip& x, const Skip& y) {
    int ex = x.span_from + x.span_len, ey = y.span_from + y.span_len;
    if (ex != ey) return ex < ey;
    return skip_order_lt(x, y);
  });
  std::vector<Skip> picked;
  int free_from = 0;
  for (const Skip& s : plain)
    if (s.span_from >= free_from) {
      picked.push_back(s);
      free_from = s.span_from + s.span_len + 1;
    }
  for (const Skip& s : wrap) {
    bool ok = true;
    for (const Skip& q : picked)
      if (spans_overlap(len, s.span_from, s.span_len, q.span_from, q.span_len)) {
        ok = false;
        break;
      }
    if (ok) picked.push_back(s);
  }
  return picked;
}

}  // namespace detail

// Searches for a nonempty zero-total-weight collection of disjoint skips and
// whole cycles. Staged: zero-weight cycles, zero-weight skips, zero-sum cycle
// subsets, cancelling skip pairs, skip-cycle mixes, then a bounded exhaustive
// combination search (at most 8 skips and 8 cycles). The parameter t bounds
// the weights the guarantees cover; the search itself does not depend on it.
inline ZeroSetSearch find_zero_skip_cycle_set(const ColoredGraph& g, const PerfectMatching& m,
                                              const AlternatingCycleSet& cycles, int t,
                                              long long budget,
                                              SkipMode mode = SkipMode::alpha) {
  (void)t;
  if (!(m == cycles.base())) throw InputError("matching is not the base of the cycle set");
  int nc = cycles.count();
  ZeroSetSearch res;
  if (nc == 0) return res;

  auto spend = [&](long long cost) {
    budget -= cost;
    return budget >= 0;
  };

  std::vector<int> wc(nc);
  for (int i = 0; i < nc; ++i) wc[i] = static_cast<int>(cycles.cycle_weight(g, i));

  for (int i = 0; i < nc; ++i)
    if (wc[i] == 0) {
      res.set = SkipCycleSet{{}, {i}};
      return res;
    }

  std::vector<std::vector<Skip>> all(nc);
  for (int i = 0; i < nc; ++i) {
    int len = cycles.cycle(i).length();
    if (!spend(static_cast<long long>(len) * len * len)) {
      res.budget_exceeded = true;
      return res;
    }
    all[i] = enumerate_skips(g, cycles, i, mode);
  }
  for (int i = 0; i < nc; ++i)
    for (const Skip& s : all[i])
      if (s.weight == 0) {
        res.set = SkipCycleSet{{s}, {}};
        return res;
      }

  // zero-sum nonempty subset of whole cycles
  {
    long long span = 0;
    for (int w : wc) span += std::abs(w);
    int off = static_cast<int>(span);
    std::vector<int> from(2 * off + 1, -2), via(2 * off + 1, -1);
    from[off] = -1;  // empty subset; reaching it again closes a zero-sum subset
    int hit_via = -1, hit_from = -1;
    for (int i = 0; i < nc && hit_via < 0; ++i) {
      std::vector<int> snapshot;
      for (int sdx = 0; sdx <= 2 * off; ++sdx)
        if (from[sdx] != -2) snapshot.push_back(sdx);
      if (!spend(static_cast<long long>(snapshot.size()))) {
        res.budget_exceeded = true;
        return res;
      }
      for (int sdx : snapshot) {
        int nxt = sdx + wc[i];
        if (nxt < 0 || nxt > 2 * off) continue;
        if (nxt == off) {
          hit_via = i;
          hit_from = sdx;
          break;
        }
        if (from[nxt] != -2) continue;
        from[nxt] = sdx;
        via[nxt] = i;
      }
    }
    if (hit_via >= 0) {
      std::vector<int> chosen{hit_via};
      for (int sdx = hit_from; via[sdx] >= 0; sdx = from[sdx]) chosen.push_back(via[sdx]);
      std::sort(chosen.begin(), chosen.end());
      res.set = SkipCycleSet{{}, chosen};
      return res;
    }
  }

  // two disjoint skips of opposite weight
  for (int w = 1; w <= 4; ++w) {
    for (int i = 0; i < nc; ++i)
      for (const Skip& sp : all[i]) {
        if (sp.weight != w) continue;
        for (int j = 0; j < nc; ++j)
          for (const Skip& sn : all[j]) {
            if (sn.weight != -w) continue;
            if (!spend(1)) {
              res.budget_exceeded = true;
              return res;
            }
            if (i == j && detail::spans_overlap(cycles.cycle(i).length(), sp.span_from,
                                                sp.span_len, sn.span_from, sn.span_len))
              continue;
            res.set = SkipCycleSet{{sp, sn}, {}};
            return res;
          }
      }
  }

  // w2 skips of weight s*w1 balanced by removing w1 cycles of weight s*w2
  std::vector<std::vector<std::vector<Skip>>> sched(nc);  // [cycle][w+4] disjoint skips
  for (int i = 0; i < nc; ++i) {
    sched[i].resize(9);
    for (int w = -4; w <= 4; ++w) {
      if (w == 0) continue;
      std::vector<Skip> cls;
      for (const Skip& s : all[i])
        if (s.weight == w) cls.push_back(s);
      sched[i][w + 4] = detail::schedule_disjoint(cycles.cycle(i).length(), std::move(cls));
    }
  }
  for (int sgn : {+1, -1})
    for (int w1 = 1; w1 <= 4; ++w1) {
      std::map<int, std::vector<int>> by_weight;  // cycle weight -> cycle indices
      for (int i = 0; i < nc; ++i) by_weight[wc[i]].push_back(i);
      for (const auto& [cw, idxs] : by_weight) {
        int w2 = sgn * cw;
        if (w2 < 1 || static_cast<int>(idxs.size()) < w1) continue;
        if (!spend(nc)) {
          res.budget_exceeded = true;
          return res;
        }
        std::vector<int> removed(idxs.begin(), idxs.begin() + w1);
        std::vector<char> is_removed(nc, 0);
        for (int ci : removed) is_removed[ci] = 1;
        std::vector<Skip> picked;
        for (int i = 0; i < nc && static_cast<int>(picked.size()) < w2; ++i) {
          if (is_removed[i]) continue;
          for (const Skip& s : sched[i][sgn * w1 + 4]) {
            picked.push_back(s);
            if (static_cast<int>(picked.size()) == w2) break;
          }
        }
        if (static_cast<int>(picked.size()) == w2) {
          res.set = SkipCycleSet{picked, removed};
          return res;
        }
      }
    }

  // bounded exhaustive mix: up to 8 skips from the disjoint pools, up to 8
  // removed cycles, zero total weight
  std::vector<Skip> pool;
  for (int i = 0; i < nc; ++i)
    for (int w = -4; w <= 4; ++w) {
      if (w == 0) continue;
      pool.insert(pool.end(), sched[i][w + 4].begin(), sched[i][w + 4].end());
    }
  std::sort(pool.begin(), pool.end(), [](const Skip& x, const Skip& y) {
    if (x.cycle != y.cycle) return x.cycle < y.cycle;
    return detail::skip_order_lt(x, y);
  });

  std::vector<Skip> chosen;
  std::vector<int> dropped;
  std::vector<char> hosts(nc, 0);
  bool out_of_budget = false;

  auto dfs = [&](auto&& self, std::size_t idx, int sum) -> bool {
    if (!spend(1)) {
      out_of_budget = true;
      return false;
    }
    if (sum == 0 && !(chosen.empty() && dropped.empty())) return true;
    // skips first, then cycles; cycles hosting chosen skips stay
    if (idx < pool.size()) {
      if (chosen.size() < 8) {
        const Skip& s = pool[idx];
        bool ok = true;
        for (const Skip& q : chosen)
          if (q.cycle == s.cycle &&
              detail::spans_overlap(cycles.cycle(s.cycle).length(), q.span_from, q.span_len,
                                    s.span_from, s.span_len)) {
            ok = false;
            break;
          }
        if (ok) {
          chosen.push_back(s);
          ++hosts[s.cycle];
          if (self(self, idx + 1, sum + s.weight)) return true;
          --hosts[s.cycle];
          chosen.pop_back();
        }
      }
      return self(self, idx + 1, sum);
    }
    std::size_t cidx = idx - pool.size();
    if (cidx >= static_cast<std::size_t>(nc)) return false;
    if (dropped.size() < 8 && !hosts[cidx]) {
      dropped.push_back(static_cast<int>(cidx));
      if (self(self, idx + 1, sum - wc[cidx])) return true;
      dropped.pop_back();
    }
    return self(self, idx + 1, sum);
  };
  if (dfs(dfs, 0, 0)) {
    res.set = SkipCycleSet{chosen, dropped};
    return res;
  }
  res.budget_exceeded = out_of_budget;
  return res;
}

// --- small constructions used by the tightening phases ------------------------

// Looks for a short alternating cycle built from one or two chords plus arcs
// of a monochromatic path: blue path -> weight in (0,2] and every off-color
// edge red; red path -> weight in [-2,0) and every off-color edge blue. The
// arcs keep their endpoints' matching edges, so junction edges must be
// matching here (the mirror image of skip junctions).
inline std::optional<AlternatingCycle> find_small_weight_cycle(
    const ColoredGraph& g, const PerfectMatching& m, const AlternatingCycle& c, const AltPath& path,
    Color color, SkipMode mode = SkipMode::alpha) {
  (void)mode;  // guarantees differ between modes, the search does not
  detail::check_alt_path(g, m, path);
  for (int e : path.edge_ids)
    if (g.edge(e).color != color || !detail::cycle_has_edge(c, e)) return std::nullopt;

  int nv = static_cast<int>(path.verts.size());
  auto matching_edge = [&](int eidx) { return m.has_edge(path.edge_ids[eidx]); };
  auto chord = [&](int x, int y) -> int {
    int id = g.edge_id(path.verts[x], path.verts[y]);
    if (id < 0 || detail::cycle_has_edge(c, id) || m.has_edge(id)) return -1;
    return id;
  };
  auto accept = [&](std::vector<int> ids) -> std::optional<AlternatingCycle> {
    int w = 0, off = 0;
    for (int id : ids) {
      w += edge_weight(g, m, id);
      off += g.edge(id).color != color ? 1 : 0;
    }
    bool good = color == Color::blue ? (w > 0 && w <= 2 && off == w)
                                     : (w >= -2 && w < 0 && off == -w);
    if (!good) return std::nullopt;
    return as_alternating_cycle(g, m, ids);
  };

  for (int i = 0; i + 1 < nv; ++i) {
    if (!matching_edge(i)) continue;
    for (int j = i + 2; j < nv; ++j) {
      if (!matching_edge(j - 1)) continue;
      int e = chord(i, j);
      if (e < 0) continue;
      std::vector<int> ids(path.edge_ids.begin() + i, path.edge_ids.begin() + j);
      ids.push_back(e);
      if (auto cyc = accept(std::move(ids))) return cyc;
    }
  }
  for (int i = 0; i + 1 < nv; ++i) {
    if (!matching_edge(i)) continue;
    for (int j = i + 2; j < nv; ++j) {
      if (!matching_edge(j - 1)) continue;
      for (int k = j + 1; k + 1 < nv; ++k) {
        if (!matching_edge(k)) continue;
        for (int l = k + 2; l < nv; ++l) {
          if (!matching_edge(l - 1)) continue;
          for (int cross = 1; cross >= 0; --cross) {
            int e1 = cross ? chord(i, k) : chord(i, l);
            int e2 = cross ? chord(j, l) : chord(j, k);
            if (e1 < 0 || e2 < 0 || e1 == e2) continue;
            std::vector<int> ids(path.edge_ids.begin() + i, path.edge_ids.begin() + j);
            ids.insert(ids.end(), path.edge_ids.begin() + k, path.edge_ids.begin() + l);
            ids.push_back(e1);
            ids.push_back(e2);
            if (auto cyc = accept(std::move(ids))) return cyc;
          }
        }
      }
    }
  }
  return std::nullopt;
}

// Longest single-color alternating sub-path over all cycles, trimmed to start
// with a non-matching edge. Returns the best found even when shorter than t;
// none when no such edge exists at all.
inline std::optional<AltPath> find_long_mono_path(const ColoredGraph& g, const PerfectMatching& m,
                                                  const AlternatingCycleSet& cycles, int t,
                                                  Color color) {
  (void)t;
  std::optional<AltPath> best;
  int best_len = 0, best_cycle = -1;
  for (int ci = 0; ci < cycles.count(); ++ci) {
    const AlternatingCycle& c = cycles.cycle(ci);
    int len = c.length();
    auto is_color = [&](int pos) { return g.edge(c.edge_ids[pos % len]).color == color; };

    std::vector<std::pair<int, int>> runs;  // (start position, edge count)
    int brk = -1;
    for (int i = 0; i < len; ++i)
      if (!is_color(i)) {
        brk = i;
        break;
      }
    if (brk < 0) {
      runs.push_back({0, len - 1});  // fully monochromatic: cap below a full lap
    } else {
      int i = brk + 1;
      while (i < brk + 1 + len) {
        if (!is_color(i)) {
          ++i;
          continue;
        }
        int j = i;
        while (j + 1 < brk + 1 + len && is_color(j + 1)) ++j;
        runs.push_back({i % len, j - i + 1});
        i = j + 1;
      }
    }
    for (auto [start, count] : runs) {
      if (m.has_edge(c.edge_ids[start % len])) {
        start = (start + 1) % len;
        --count;
      }
      if (count > best_len) {
        best_len = count;
        best_cycle = ci;
        auto vp = cycle_path(c, start % len, (start + count) % len);
        best = make_alt_path(std::move(vp));
      }
    }
  }
  (void)best_cycle;
  return best;
}

}  // namespace exmatch
