#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "exmatch/errors.hpp"
#include "exmatch/graph.hpp"
#include "exmatch/mocp.hpp"
#include "exmatch/rng.hpp"

namespace exmatch {

struct EmInstance {
  ColoredGraph graph;
  int k;
};

struct MocpInstance {
  WeightedDigraph digraph;
};

// Exactly one of the two members is set, matching the header line.
struct Instance {
  std::optional<EmInstance> em;
  std::optional<MocpInstance> mocp;
};

namespace detail {

[[noreturn]] inline void parse_fail(int line, const std::string& what) {
  throw InputError("line " + std::to_string(line) + ": " + what);
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

inline long long parse_ll(const std::string& t, int line, const std::string& what) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(t, &pos);
  } catch (...) {
    parse_fail(line, "expected integer " + what + ", got '" + t + "'");
  }
  if (pos != t.size())
    parse_fail(line, "expected integer " + what + ", got '" + t + "'");
  return v;
}

inline int parse_int(const std::string& t, int line, const std::string& what,
                     long long lo, long long hi) {
  long long v = parse_ll(t, line, what);
  if (v < lo || v > hi) parse_fail(line, what + " out of range: " + t);
  return static_cast<int>(v);
}

}  // namespace detail

// Line-oriented instance text. 'c' lines are comments; one 'p' header gives
// the problem and declared sizes; an optional 't bipartite <nA>' must appear
// before any edge; 'e u v r|b' and 'a u v w' carry edges and arcs. Every
// rejection names the offending line.
inline Instance parse_instance(const std::string& text) {
  std::istringstream is(text);
  std::string raw;
  int line = 0;

  bool have_header = false;
  bool is_em = false;
  int n = 0, m_declared = 0, k = 0;
  std::optional<int> side_a;
  std::optional<ColoredGraph> g;
  std::optional<WeightedDigraph> d;

  auto graph_ready = [&]() -> ColoredGraph& {
    if (!g) g.emplace(n, side_a);
    return *g;
  };

  while (std::getline(is, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::vector<std::string> tok = detail::split_ws(raw);
    if (tok.empty()) continue;
    if (tok[0] == "c") continue;

    if (tok[0] == "p") {
      if (have_header) detail::parse_fail(line, "duplicate header");
      if (tok.size() == 5 && tok[1] == "em") {
        n = detail::parse_int(tok[2], line, "vertex count", 1, 1 << 20);
        m_declared = detail::parse_int(tok[3], line, "edge count", 0, 1 << 26);
        k = detail::parse_int(tok[4], line, "red target", -(1 << 20), 1 << 20);
        is_em = true;
      } else if (tok.size() == 4 && tok[1] == "mocp") {
        n = detail::parse_int(tok[2], line, "vertex count", 1, 1 << 20);
        m_declared = detail::parse_int(tok[3], line, "arc count", 0, 1 << 26);
        d.emplace(n);
      } else {
        detail::parse_fail(line, "malformed header");
      }
      have_header = true;
      continue;
    }

    if (!have_header) detail::parse_fail(line, "directive before header");

    if (tok[0] == "t") {
      if (!is_em) detail::parse_fail(line, "'t' is only valid for em instances");
      if (tok.size() != 3 || tok[1] != "bipartite")
        detail::parse_fail(line, "malformed 't' line");
      if (side_a) detail::parse_fail(line, "duplicate 't' line");
      if (g) detail::parse_fail(line, "bipartition must precede edges");
      side_a = detail::parse_int(tok[2], line, "side size", 0, n);
      continue;
    }

    if (tok[0] == "e") {
      if (!is_em) detail::parse_fail(line, "'e' is only valid for em instances");
      if (tok.size() != 4) detail::parse_fail(line, "malformed 'e' line");
      int u = detail::parse_int(tok[1], line, "vertex", 1, n);
      int v = detail::parse_int(tok[2], line, "vertex", 1, n);
      Color col;
      if (tok[3] == "r")
        col = Color::red;
      else if (tok[3] == "b")
        col = Color::blue;
      else
        detail::parse_fail(line, "edge color must be 'r' or 'b'");
      try {
        graph_ready().add_edge(u, v, col);
      } catch (const InputError& e) {
        detail::parse_fail(line, e.what());
      }
      continue;
    }

    if (tok[0] == "a") {
      if (is_em) detail::parse_fail(line, "'a' is only valid for mocp instances");
      if (tok.size() != 4) detail::parse_fail(line, "malformed 'a' line");
      int u = detail::parse_int(tok[1], line, "vertex", 1, n);
      int v = detail::parse_int(tok[2], line, "vertex", 1, n);
      long long w = detail::parse_ll(tok[3], line, "arc weight");
      try {
        d->add_arc(u, v, w);
      } catch (const InputError& e) {
        detail::parse_fail(line, e.what());
      }
      continue;
    }

    detail::parse_fail(line, "unknown line type '" + tok[0] + "'");
  }

  if (!have_header) throw InputError("missing header");
  Instance ins;
  if (is_em) {
    ColoredGraph& gg = graph_ready();
    if (gg.m() != m_declared)
      throw InputError("header declares " + std::to_string(m_declared) +
                       " edges, file has " + std::to_string(gg.m()));
    ins.em = EmInstance{std::move(gg), k};
  } else {
    if (d->m() != m_declared)
      throw InputError("header declares " + std::to_string(m_declared) +
                       " arcs, file has " + std::to_string(d->m()));
    ins.mocp = MocpInstance{std::move(*d)};
  }
  return ins;
}

inline std::string render_instance(const ColoredGraph& g, int k) {
  std::ostringstream os;
  os << "p em " << g.n() << ' ' << g.m() << ' ' << k << '\n';
  if (g.bipartite()) os << "t bipartite " << g.side_a_count() << '\n';
  for (int id = 0; id < g.m(); ++id) {
    const Edge& e = g.edge(id);
    os << "e " << e.u << ' ' << e.v << ' '
       << (e.color == Color::red ? 'r' : 'b') << '\n';
  }
  return os.str();
}

inline std::string render_instance(const WeightedDigraph& d) {
  std::ostringstream os;
  os << "p mocp " << d.n() << ' ' << d.m() << '\n';
  for (const Arc& a : d.arcs()) os << "a " << a.u << ' ' << a.v << ' ' << a.w << '\n';
  return os.str();
}

inline std::string render_instance(const Instance& ins) {
  if (ins.em) return render_instance(ins.em->graph, ins.em->k);
  return render_instance(ins.mocp->digraph);
}

// Solver reports. A yes-report lists the matching as 'm u v' lines so it can
// be fed back through verification unchanged.
inline std::string render_matching_report(const ColoredGraph& g,
                                          const PerfectMatching& m) {
  std::ostringstream os;
  os << "s yes r=" << m.red_count() << '\n';
  for (int id : m.edge_ids()) {
    const Edge& e = g.edge(id);
    os << "m " << e.u << ' ' << e.v << '\n';
  }
  return os.str();
}

inline std::string render_cycle_report(const WeightedDigraph& d, const MocpResult& r) {
  std::ostringstream os;
  os << "s yes w=" << r.weight << '\n';
  for (int id : r.cycle.arc_ids) {
    const Arc& a = d.arc(id);
    os << "a " << a.u << ' ' << a.v << '\n';
  }
  return os.str();
}

inline std::string render_no_report() { return "s no\n"; }
inline std::string render_budget_report() { return "s budget\n"; }

// Reads the 'm u v' lines of a report (or a bare matching file) back into a
// perfect matching on g. 's' and 'c' lines pass through unchecked.
inline PerfectMatching parse_matching(const ColoredGraph& g, const std::string& text) {
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  std::vector<int> ids;
  while (std::getline(is, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::vector<std::string> tok = detail::split_ws(raw);
    if (tok.empty()) continue;
    if (tok[0] == "c" || tok[0] == "s") continue;
    if (tok[0] != "m") detail::parse_fail(line, "unknown line type '" + tok[0] + "'");
    if (tok.size() != 3) detail::parse_fail(line, "malformed 'm' line");
    int u = detail::parse_int(tok[1], line, "vertex", 1, g.n());
    int v = detail::parse_int(tok[2], line, "vertex", 1, g.n());
    int id = g.edge_id(u, v);
    if (id < 0)
      detail::parse_fail(line, "no such edge: " + tok[1] + " " + tok[2]);
    ids.push_back(id);
  }
  return PerfectMatching(g, std::move(ids));  // validates perfection
}

// --- seeded generators ------------------------------------------------------
// Every generator draws from one Rng in a fixed scan order, so equal
// parameters and seed reproduce the instance byte for byte.

namespace detail {

inline void check_prob(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw InputError(std::string(what) + " must lie in [0,1]");
}

}  // namespace detail

inline ColoredGraph gen_random_bipartite(int na, int nb, double p, double redprob,
                                         std::uint64_t seed) {
  if (na < 1 || nb < 1) throw InputError("sides must be non-empty");
  detail::check_prob(p, "edge probability");
  detail::check_prob(redprob, "red probability");
  Rng rng(seed);
  ColoredGraph g(na + nb, na);
  for (int u = 1; u <= na; ++u)
    for (int v = na + 1; v <= na + nb; ++v)
      if (rng.chance(p))
        g.add_edge(u, v, rng.chance(redprob) ? Color::red : Color::blue);
  return g;
}

inline ColoredGraph gen_complete(int n, double redprob, std::uint64_t seed) {
  if (n < 1) throw InputError("need at least one vertex");
  detail::check_prob(redprob, "red probability");
  Rng rng(seed);
  ColoredGraph g(n, std::nullopt);
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v)
      g.add_edge(u, v, rng.chance(redprob) ? Color::red : Color::blue);
  return g;
}

inline ColoredGraph gen_complete_bipartite(int na, double redprob, std::uint64_t seed) {
  if (na < 1) throw InputError("need at least one vertex per side");
  detail::check_prob(redprob, "red probability");
  Rng rng(seed);
  ColoredGraph g(2 * na, na);
  for (int u = 1; u <= na; ++u)
    for (int v = na + 1; v <= 2 * na; ++v)
      g.add_edge(u, v, rng.chance(redprob) ? Color::red : Color::blue);
  return g;
}

struct PlantedEm {
  ColoredGraph graph;
  int k;
  std::vector<int> planted;  // edge ids of a perfect matching with exactly k red
};

// Pairs up a random permutation, colours the first k pairs red, then sprinkles
// extra edges around the plant. The planted pairs enter first, so their edge
// ids are 0..n/2-1 and the instance is a yes-instance by construction.
inline PlantedEm gen_planted_em(int n, int k, std::uint64_t seed) {
  if (n < 2 || n % 2 != 0) throw InputError("planted instances need even n >= 2");
  if (k < 0 || k > n / 2) throw InputError("red target out of range");
  Rng rng(seed);
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i + 1;
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  ColoredGraph g(n, std::nullopt);
  std::vector<int> planted;
  for (int i = 0; i < n / 2; ++i) {
    int u = perm[static_cast<std::size_t>(2 * i)];
    int v = perm[static_cast<std::size_t>(2 * i + 1)];
    planted.push_back(g.add_edge(u, v, i < k ? Color::red : Color::blue));
  }
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) {
      if (g.edge_id(u, v) >= 0) continue;
      if (rng.chance(0.35))
        g.add_edge(u, v, rng.chance(0.5) ? Color::red : Color::blue);
    }
  return PlantedEm{std::move(g), k, std::move(planted)};
}

inline WeightedDigraph gen_random_digraph(int n, double p, int wmax,
                                          std::uint64_t seed) {
  if (n < 1) throw InputError("need at least one vertex");
  if (wmax < 0) throw InputError("weight bound must be non-negative");
  detail::check_prob(p, "arc probability");
  Rng rng(seed);
  WeightedDigraph d(n);
  for (int u = 1; u <= n; ++u)
    for (int v = 1; v <= n; ++v) {
      if (u == v) continue;
      if (rng.chance(p)) d.add_arc(u, v, rng.int_in(0, wmax));
    }
  return d;
}

}  // namespace exmatch
