#include <algorithm>
#include <set>

#include <catch2/catch_amalgamated.hpp>

#include "exmatch/io.hpp"
#include "exmatch/matching.hpp"
#include "exmatch/oracles.hpp"

using namespace exmatch;

namespace {

ColoredGraph petersen() {
  ColoredGraph g(10, std::nullopt);
  const int outer[5][2] = {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}};
  const int inner[5][2] = {{6, 8}, {8, 10}, {10, 7}, {7, 9}, {9, 6}};
  for (auto& e : outer) g.add_edge(e[0], e[1], Color::red);
  for (auto& e : inner) g.add_edge(e[0], e[1], Color::blue);
  for (int i = 1; i <= 5; ++i) g.add_edge(i, i + 5, Color::blue);
  return g;
}

std::set<int> red_counts(const ColoredGraph& g) {
  std::set<int> out;
  for (const auto& ids : enumerate_pms(g)) {
    int r = 0;
    for (int id : ids)
      if (g.edge(id).color == Color::red) ++r;
    out.insert(r);
  }
  return out;
}

}  // namespace

TEST_CASE("perfect matching counts on reference graphs") {
  CHECK(enumerate_pms(gen_complete(4, 0.5, 1)).size() == 3);
  CHECK(enumerate_pms(gen_complete(6, 0.5, 1)).size() == 15);
  CHECK(enumerate_pms(gen_complete(8, 0.5, 1)).size() == 105);
  CHECK(enumerate_pms(gen_complete(10, 0.5, 1)).size() == 945);
  CHECK(enumerate_pms(gen_complete_bipartite(3, 0.5, 1)).size() == 6);    // 3!
  CHECK(enumerate_pms(gen_complete_bipartite(4, 0.5, 1)).size() == 24);   // 4!
  CHECK(enumerate_pms(petersen()).size() == 6);

  ColoredGraph path(4, std::nullopt);
  path.add_edge(1, 2, Color::red);
  path.add_edge(2, 3, Color::blue);
  path.add_edge(3, 4, Color::red);
  CHECK(enumerate_pms(path).size() == 1);

  ColoredGraph odd(3, std::nullopt);
  odd.add_edge(1, 2, Color::red);
  CHECK(enumerate_pms(odd).empty());
}

TEST_CASE("enumeration refuses graphs beyond its vertex cap") {
  CHECK_THROWS_AS(enumerate_pms(gen_complete(18, 0.5, 1)), BudgetError);
  OracleCaps caps;
  caps.max_vertices = 8;
  CHECK_THROWS_AS(enumerate_pms(gen_complete(10, 0.5, 1), caps), BudgetError);
}

TEST_CASE("brute decisions agree with direct enumeration") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    int n = 4 + 2 * static_cast<int>(seed % 3);
    ColoredGraph g = gen_complete(n, 0.5, seed);
    auto reds = [&](const std::vector<int>& ids) {
      int r = 0;
      for (int id : ids)
        if (g.edge(id).color == Color::red) ++r;
      return r;
    };
    std::set<int> rs = red_counts(g);
    for (int k = 0; k <= n / 2; ++k) {
      BruteDecision ex = brute_decide(Problem::exact_red, g, k);
      CHECK(ex.yes == (rs.count(k) > 0));
      if (ex.yes) CHECK(reds(*ex.witness) == k);

      bool want_b = false, want_p = false;
      for (int r : rs) {
        if ((k - r) % 2 == 0) want_p = true;
        if (r <= k && (k - r) % 2 == 0) want_b = true;
      }
      BruteDecision bo = brute_decide(Problem::bounded_parity_red, g, k);
      CHECK(bo.yes == want_b);
      if (bo.yes) {
        CHECK(reds(*bo.witness) <= k);
        CHECK((k - reds(*bo.witness)) % 2 == 0);
      }
      BruteDecision pa = brute_decide(Problem::parity_red, g, k);
      CHECK(pa.yes == want_p);
      if (pa.yes) CHECK((k - reds(*pa.witness)) % 2 == 0);
    }
  }
}

TEST_CASE("extremal matchings hit the true red extremes") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    ColoredGraph g = seed % 2 == 0 ? gen_complete(8, 0.4, seed)
                                   : gen_random_bipartite(4, 4, 0.8, 0.5, seed);
    std::set<int> rs = red_counts(g);
    auto lo = extremal_red_pm(g, Extremal::min_red);
    auto hi = extremal_red_pm(g, Extremal::max_red);
    if (rs.empty()) {
      CHECK_FALSE(lo);
      CHECK_FALSE(hi);
      continue;
    }
    REQUIRE(lo);
    REQUIRE(hi);
    CHECK(lo->red_count() == *rs.begin());
    CHECK(hi->red_count() == *rs.rbegin());
  }
}

TEST_CASE("monochromatic completion honors forced edges and the fill color") {
  ColoredGraph g = gen_complete(6, 0.0, 2);  // all blue
  auto m = complete_monochromatic(g, {g.edge_id(1, 2)}, Color::blue);
  REQUIRE(m);
  CHECK(m->has_edge(g.edge_id(1, 2)));
  CHECK(m->red_count() == 0);
  // red fill cannot work on an all-blue graph
  CHECK_FALSE(complete_monochromatic(g, {g.edge_id(1, 2)}, Color::red));
  // clashing forced edges
  CHECK_FALSE(complete_monochromatic(g, {g.edge_id(1, 2), g.edge_id(2, 3)}, Color::blue));
}

TEST_CASE("independence numbers on reference graphs") {
  CHECK(brute_independence(gen_complete(5, 0.5, 1), IndependenceKind::whole_graph) == 1);
  CHECK(brute_independence(petersen(), IndependenceKind::whole_graph) == 4);

  ColoredGraph c5(5, std::nullopt);
  for (int i = 1; i <= 5; ++i) c5.add_edge(i, i % 5 + 1, Color::red);
  CHECK(brute_independence(c5, IndependenceKind::whole_graph) == 2);

  ColoredGraph empty(6, std::nullopt);
  CHECK(brute_independence(empty, IndependenceKind::whole_graph) == 6);

  // complete bipartite graphs have no balanced independent pair at all
  CHECK(brute_independence(gen_complete_bipartite(3, 0.5, 1),
                           IndependenceKind::balanced_bipartite) == 0);
  ColoredGraph sparse(6, 3);
  sparse.add_edge(1, 4, Color::red);
  CHECK(brute_independence(sparse, IndependenceKind::balanced_bipartite) == 2);
  CHECK_THROWS_AS(brute_independence(gen_complete(4, 0.5, 1),
                                     IndependenceKind::balanced_bipartite),
                  InputError);
}

TEST_CASE("brute odd-cycle search handles loops and parallel arcs") {
  WeightedDigraph d(3);
  d.add_arc(1, 1, 3);  // odd loop
  d.add_arc(1, 2, 1);
  d.add_arc(2, 1, 1);  // 2-cycle of weight 2: even, does not qualify
  auto r = brute_mocp(d, d.weights());
  REQUIRE(r);
  CHECK(r->weight == 3);
  CHECK(r->cycle.length() == 1);

  WeightedDigraph p(2);
  p.add_arc(1, 2, 0);
  p.add_arc(2, 1, 2);
  p.add_arc(2, 1, 1);  // parallel arc flips the parity
  auto q = brute_mocp(p, p.weights());
  REQUIRE(q);
  CHECK(q->weight == 1);

  WeightedDigraph none(3);
  none.add_arc(1, 2, 1);
  none.add_arc(2, 3, 1);
  CHECK_FALSE(brute_mocp(none, none.weights()));
}
