#include <catch2/catch_amalgamated.hpp>

#include "exmatch/graph.hpp"
#include "exmatch/io.hpp"
#include "exmatch/rng.hpp"
#include "exmatch/skips.hpp"

using namespace exmatch;

namespace {

PerfectMatching shift_pm(const ColoredGraph& g, int off) {
  // pairs (1+off, 2+off), (3+off, 4+off), ... modulo n
  std::vector<int> ids;
  int n = g.n();
  for (int i = 0; i < n; i += 2) {
    int u = (i + off) % n + 1, v = (i + 1 + off) % n + 1;
    ids.push_back(g.edge_id(u, v));
  }
  return PerfectMatching(g, std::move(ids));
}

PerfectMatching random_pm_complete(const ColoredGraph& g, Rng& rng) {
  std::vector<int> perm(static_cast<std::size_t>(g.n()));
  for (int i = 0; i < g.n(); ++i) perm[static_cast<std::size_t>(i)] = i + 1;
  for (int i = g.n() - 1; i > 0; --i) {
    int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  std::vector<int> ids;
  for (int i = 0; i < g.n(); i += 2)
    ids.push_back(g.edge_id(perm[static_cast<std::size_t>(i)],
                            perm[static_cast<std::size_t>(i + 1)]));
  return PerfectMatching(g, std::move(ids));
}

}  // namespace

TEST_CASE("graph construction rejects bad edges") {
  ColoredGraph g(4, std::nullopt);
  g.add_edge(1, 2, Color::red);
  CHECK_THROWS_AS(g.add_edge(1, 2, Color::blue), InputError);  // duplicate
  CHECK_THROWS_AS(g.add_edge(2, 1, Color::blue), InputError);  // same pair
  CHECK_THROWS_AS(g.add_edge(3, 3, Color::red), InputError);   // loop
  CHECK_THROWS_AS(g.add_edge(0, 1, Color::red), InputError);
  CHECK_THROWS_AS(g.add_edge(4, 5, Color::red), InputError);

  ColoredGraph b(4, 2);
  CHECK_THROWS_AS(b.add_edge(1, 2, Color::red), InputError);  // inside side A
  CHECK_THROWS_AS(b.add_edge(3, 4, Color::red), InputError);  // inside side B
  CHECK(b.add_edge(1, 3, Color::red) == 0);
}

TEST_CASE("edge ids are dense, in insertion order, and color-swap keeps them") {
  ColoredGraph g(6, std::nullopt);
  int e0 = g.add_edge(1, 2, Color::red);
  int e1 = g.add_edge(3, 4, Color::blue);
  int e2 = g.add_edge(5, 6, Color::red);
  CHECK(e0 == 0);
  CHECK(e1 == 1);
  CHECK(e2 == 2);
  CHECK(g.edge_id(2, 1) == 0);
  CHECK(g.edge_id(1, 5) == -1);

  ColoredGraph s = g.with_swapped_colors();
  CHECK(s.edge(0).color == Color::blue);
  CHECK(s.edge(1).color == Color::red);
  CHECK(s.edge(2).color == Color::blue);
  CHECK(s.edge_id(3, 4) == 1);
  CHECK(g.red_edge_ids() == std::vector<int>{0, 2});
  CHECK(s.red_edge_ids() == std::vector<int>{1});
}

TEST_CASE("perfect matching validation") {
  ColoredGraph g = gen_complete(6, 0.5, 1);
  std::vector<int> good{g.edge_id(1, 2), g.edge_id(3, 4), g.edge_id(5, 6)};
  PerfectMatching m(g, good);
  CHECK(m.size() == 3);
  CHECK(m.mate(1) == 2);
  CHECK(m.mate(6) == 5);
  CHECK(m.has_edge(g.edge_id(3, 4)));
  CHECK_FALSE(m.has_edge(g.edge_id(1, 3)));

  CHECK_THROWS_AS(PerfectMatching(g, {g.edge_id(1, 2), g.edge_id(2, 3)}), InputError);
  CHECK_THROWS_AS(PerfectMatching(g, {g.edge_id(1, 2)}), InputError);  // not perfect
  CHECK_THROWS_AS(PerfectMatching(g, {0, 0, 1}), InputError);
}

TEST_CASE("matching-relative edge weights") {
  ColoredGraph g(4, std::nullopt);
  int rm = g.add_edge(1, 2, Color::red);   // red, will be matched
  int bm = g.add_edge(3, 4, Color::blue);  // blue, matched
  int rn = g.add_edge(1, 3, Color::red);   // red, not matched
  int bn = g.add_edge(2, 4, Color::blue);  // blue, not matched
  PerfectMatching m(g, {rm, bm});
  CHECK(edge_weight(g, m, rm) == -1);
  CHECK(edge_weight(g, m, bm) == 0);
  CHECK(edge_weight(g, m, rn) == 1);
  CHECK(edge_weight(g, m, bn) == 0);
}

TEST_CASE("red count moves by the weight of the symmetric difference") {
  Rng rng(99);
  for (int trial = 0; trial < 400; ++trial) {
    int n = 6 + 2 * static_cast<int>(rng.below(4));
    ColoredGraph g = gen_complete(n, 0.3 + 0.05 * static_cast<double>(rng.below(9)),
                                  rng.below(1u << 30));
    PerfectMatching m = random_pm_complete(g, rng);
    PerfectMatching mp = random_pm_complete(g, rng);
    std::vector<int> diff;
    for (int id = 0; id < g.m(); ++id)
      if (m.has_edge(id) != mp.has_edge(id)) diff.push_back(id);
    long long w = 0;
    for (int id : diff) w += edge_weight(g, m, id);
    CHECK(mp.red_count() == m.red_count() + w);
  }
}

TEST_CASE("symmetric difference splits into alternating cycles") {
  Rng rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    ColoredGraph g = gen_complete(10, 0.5, trial + 1);
    PerfectMatching m = random_pm_complete(g, rng);
    PerfectMatching mp = random_pm_complete(g, rng);
    AlternatingCycleSet cs(g, m, mp);
    std::int64_t total = 0;
    for (int i = 0; i < cs.count(); ++i) {
      const AlternatingCycle& c = cs.cycle(i);
      REQUIRE(c.length() >= 4);
      REQUIRE(c.length() % 2 == 0);
      total += c.length();
      // edges alternate between the two matchings
      for (int j = 0; j < c.length(); ++j) {
        bool in_m = m.has_edge(c.edge_ids[static_cast<std::size_t>(j)]);
        bool next_m =
            m.has_edge(c.edge_ids[static_cast<std::size_t>((j + 1) % c.length())]);
        REQUIRE(in_m != next_m);
      }
    }
    CHECK(total == cs.total_edges());

    // the set is canonical: building it from the other side gives the same
    // cycles in the same order
    AlternatingCycleSet sc(g, mp, m);
    REQUIRE(sc.count() == cs.count());
    for (int i = 0; i < cs.count(); ++i)
      CHECK(sc.cycle(i).verts == cs.cycle(i).verts);
  }
}

TEST_CASE("toggling one cycle of the difference moves between matchings") {
  ColoredGraph g = gen_complete(8, 0.5, 3);
  PerfectMatching m = shift_pm(g, 0);
  PerfectMatching mp = shift_pm(g, 1);
  AlternatingCycleSet cs(g, m, mp);
  REQUIRE(cs.count() == 1);
  PerfectMatching t = toggle(g, m, cs.cycle(0).edge_ids);
  CHECK(t == mp);
  CHECK(toggle(g, t, cs.cycle(0).edge_ids) == m);
}

TEST_CASE("cycle_path walks forward inclusively") {
  ColoredGraph g = gen_complete(8, 0.5, 4);
  PerfectMatching m = shift_pm(g, 0);
  PerfectMatching mp = shift_pm(g, 1);
  AlternatingCycleSet cs(g, m, mp);
  const AlternatingCycle& c = cs.cycle(0);
  int len = c.length();
  AltPath p = make_alt_path(cycle_path(c, 2, (2 + 3) % len));
  CHECK(p.length() == 3);
  CHECK(p.verts.front() == c.verts[2]);
  CHECK(p.verts.back() == c.verts[static_cast<std::size_t>((2 + 3) % len)]);
  // wrap-around keeps the edge order of the cycle
  AltPath q = make_alt_path(cycle_path(c, len - 1, 1));
  CHECK(q.length() == 2);
  CHECK(q.verts.front() == c.verts[static_cast<std::size_t>(len - 1)]);
}

TEST_CASE("toggle validates the result") {
  ColoredGraph g = gen_complete(6, 0.5, 9);
  PerfectMatching m = shift_pm(g, 0);
  CHECK_THROWS_AS(toggle(g, m, std::vector<int>{g.edge_id(1, 3)}), InputError);
}
