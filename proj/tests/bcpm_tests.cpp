#include <catch2/catch_amalgamated.hpp>

#include "exmatch/bcpm.hpp"
#include "exmatch/io.hpp"
#include "exmatch/rng.hpp"

using namespace exmatch;

namespace {

// all simple directed cycles, as arc id lists
void dicycles_from(const WeightedDigraph& d, int s, int v, std::vector<bool>& used,
                   std::vector<int>& arcs, std::vector<std::vector<int>>& out) {
  for (int a : d.out(v)) {
    const Arc& arc = d.arc(a);
    if (arc.v < s) continue;
    if (arc.v == s) {
      arcs.push_back(a);
      out.push_back(arcs);
      arcs.pop_back();
      continue;
    }
    if (used[static_cast<std::size_t>(arc.v)]) continue;
    used[static_cast<std::size_t>(arc.v)] = true;
    arcs.push_back(a);
    dicycles_from(d, s, arc.v, used, arcs, out);
    arcs.pop_back();
    used[static_cast<std::size_t>(arc.v)] = false;
  }
}

std::vector<std::vector<int>> all_dicycles(const WeightedDigraph& d) {
  std::vector<std::vector<int>> out;
  for (int s = 1; s <= d.n(); ++s) {
    std::vector<bool> used(static_cast<std::size_t>(d.n() + 1), false);
    used[static_cast<std::size_t>(s)] = true;
    std::vector<int> arcs;
    dicycles_from(d, s, s, used, arcs, out);
  }
  return out;
}

}  // namespace

TEST_CASE("orientation turns alternating cycles into directed ones") {
  ColoredGraph g = gen_complete_bipartite(3, 0.5, 4);
  auto m0 = extremal_red_pm(g, Extremal::min_red);
  REQUIRE(m0);
  WeightedDigraph d = orient_by_matching(g, *m0);
  CHECK(d.m() == g.m());
  for (int id = 0; id < g.m(); ++id) {
    const Arc& a = d.arc(id);
    const Edge& e = g.edge(id);
    // arc ids coincide with edge ids, weights are matching-relative
    CHECK(a.w == edge_weight(g, *m0, id));
    if (m0->has_edge(id))
      CHECK(g.side_a(a.u));
    else
      CHECK_FALSE(g.side_a(a.u));
    CHECK(((a.u == e.u && a.v == e.v) || (a.u == e.v && a.v == e.u)));
  }
  ColoredGraph k4 = gen_complete(4, 0.5, 1);
  PerfectMatching k4m(k4, {k4.edge_id(1, 2), k4.edge_id(3, 4)});
  CHECK_THROWS_AS(orient_by_matching(k4, k4m), InputError);  // needs a bipartition
}

TEST_CASE("reweighting is non-negative and keeps every cycle weight") {
  Rng rng(31);
  int checked_cycles = 0;
  for (int trial = 0; trial < 80; ++trial) {
    int na = rng.int_in(2, 5);
    ColoredGraph g =
        gen_random_bipartite(na, na, 0.8, 0.5, rng.below(1u << 30));
    auto m0 = extremal_red_pm(g, Extremal::min_red);
    if (!m0) continue;
    WeightedDigraph d = orient_by_matching(g, *m0);
    Reweighting rw = reweight_nonnegative(d);
    for (std::int64_t w : rw.weights) REQUIRE(w >= 0);
    std::vector<std::int64_t> orig = d.weights();
    for (const auto& cyc : all_dicycles(d)) {
      REQUIRE(arc_weight_sum(rw.weights, cyc) == arc_weight_sum(orig, cyc));
      ++checked_cycles;
    }
  }
  CHECK(checked_cycles > 200);
}

TEST_CASE("reweighting refuses a negative cycle") {
  WeightedDigraph d(2);
  d.add_arc(1, 2, -1);
  d.add_arc(2, 1, 0);
  CHECK_THROWS_AS(reweight_nonnegative(d), InputError);
}

TEST_CASE("bipartite bounded-parity solver agrees with brute force") {
  Rng rng(55);
  int yes = 0, no = 0;
  for (int trial = 0; trial < 250; ++trial) {
    int na = rng.int_in(2, 6);
    double p = 0.4 + 0.2 * static_cast<double>(rng.below(4));
    ColoredGraph g = gen_random_bipartite(na, na, p, 0.5, rng.below(1u << 30));
    int k = rng.int_in(0, na + 1);  // sometimes above the maximum
    auto fast = solve_bcpm_bipartite(g, k);
    BruteDecision slow = brute_decide(Problem::bounded_parity_red, g, k);
    REQUIRE(fast.has_value() == slow.yes);
    if (!fast) {
      ++no;
      continue;
    }
    ++yes;
    CHECK(fast->red_count() <= k);
    CHECK((k - fast->red_count()) % 2 == 0);
  }
  CHECK(yes >= 60);
  CHECK(no >= 30);
}

TEST_CASE("brute bounded-parity reference returns the reddest qualifying matching") {
  ColoredGraph g = gen_complete(8, 0.5, 21);
  for (int k = 0; k <= 4; ++k) {
    auto m = solve_bcpm_bruteforce(g, k);
    BruteDecision bd = brute_decide(Problem::bounded_parity_red, g, k);
    REQUIRE(m.has_value() == bd.yes);
    if (!m) continue;
    CHECK(m->red_count() <= k);
    CHECK((k - m->red_count()) % 2 == 0);
    // nothing with the right parity sits between the answer and k
    for (int r = m->red_count() + 2; r <= k; r += 2)
      CHECK_FALSE(brute_decide(Problem::exact_red, g, r).yes);
  }
}

TEST_CASE("bounded-parity contract corners") {
  ColoredGraph g = gen_complete_bipartite(3, 0.5, 9);
  CHECK_FALSE(solve_bcpm_bipartite(g, -1));
  // targets above n/2 are clamped without changing the answer set
  auto big = solve_bcpm_bipartite(g, 9);
  auto clamped = solve_bcpm_bipartite(g, 3);
  REQUIRE(big.has_value() == clamped.has_value());
  CHECK_THROWS_AS(solve_bcpm_bipartite(gen_complete(4, 0.5, 1), 1), InputError);

  ColoredGraph odd_side(6, 2);  // 2 + 4 split cannot have a perfect matching
  odd_side.add_edge(1, 3, Color::red);
  odd_side.add_edge(2, 4, Color::red);
  CHECK_FALSE(solve_bcpm_bipartite(odd_side, 1));
}
