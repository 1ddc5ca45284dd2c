#include <catch2/catch_amalgamated.hpp>

#include "exmatch/io.hpp"
#include "exmatch/mocp.hpp"
#include "exmatch/oracles.hpp"
#include "exmatch/rng.hpp"

using namespace exmatch;

namespace {

// digraph built fresh around a prescribed closed vertex sequence, so every
// walk is realizable by construction; parallel arcs keep ids distinct
struct SynthWalk {
  WeightedDigraph d;
  Walk walk;
};

SynthWalk synth_walk(int n, int len, Rng& rng) {
  WeightedDigraph d(n);
  std::vector<int> vs;
  vs.push_back(rng.int_in(1, n));
  for (int i = 1; i < len; ++i) {
    int next = rng.int_in(1, n);
    if (next == vs.back()) next = next % n + 1;  // no accidental loops
    vs.push_back(next);
  }
  vs.push_back(vs.front());
  Walk z;
  std::int64_t total = 0;
  for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
    std::int64_t w = rng.int_in(0, 5);
    if (i + 2 == vs.size() && (total + w) % 2 == 0) w += 1;  // force odd
    total += w;
    z.arc_ids.push_back(d.add_arc(vs[i], vs[i + 1], w));
  }
  return SynthWalk{std::move(d), std::move(z)};
}

bool cycle_simple(const WeightedDigraph& d, const DirectedCycle& c) {
  std::vector<int> vs;
  for (int a : c.arc_ids) vs.push_back(d.arc(a).u);
  std::sort(vs.begin(), vs.end());
  return std::adjacent_find(vs.begin(), vs.end()) == vs.end();
}

}  // namespace

TEST_CASE("walk plumbing") {
  WeightedDigraph d(3);
  int a01 = d.add_arc(1, 2, 1);
  int a12 = d.add_arc(2, 3, 1);
  int a20 = d.add_arc(3, 1, 1);
  Walk z{{a01, a12, a20}};
  CHECK(walk_closed(d, z));
  CHECK(walk_vertices(d, z) == std::vector<int>{1, 2, 3, 1});
  Walk open{{a01, a12}};
  CHECK_FALSE(walk_closed(d, open));
  Walk broken{{a01, a20}};
  CHECK_THROWS_AS(walk_vertices(d, broken), InputError);
}

TEST_CASE("odd cycle extraction trims repeats and preserves parity") {
  // figure eight: odd triangle and even triangle sharing vertex 1
  WeightedDigraph d(5);
  int t1a = d.add_arc(1, 2, 1);
  int t1b = d.add_arc(2, 3, 1);
  int t1c = d.add_arc(3, 1, 1);  // weight 3, odd
  int t2a = d.add_arc(1, 4, 2);
  int t2b = d.add_arc(4, 5, 1);
  int t2c = d.add_arc(5, 1, 1);  // weight 4, even
  Walk z{{t1a, t1b, t1c, t2a, t2b, t2c}};
  DirectedCycle c = extract_odd_cycle(d, d.weights(), z);
  CHECK(arc_weight_sum(d.weights(), c.arc_ids) == 3);
  CHECK(cycle_simple(d, c));

  Walk even{{t2a, t2b, t2c}};
  CHECK_THROWS_AS(extract_odd_cycle(d, d.weights(), even), InputError);
  Walk open{{t1a, t1b}};
  CHECK_THROWS_AS(extract_odd_cycle(d, d.weights(), open), InputError);
  CHECK_THROWS_AS(extract_odd_cycle(d, {1, 2}, z), InputError);  // size mismatch
}

TEST_CASE("extraction on random odd closed walks") {
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    SynthWalk s = synth_walk(rng.int_in(3, 9), rng.int_in(2, 40), rng);
    std::int64_t in_w = arc_weight_sum(s.d.weights(), s.walk.arc_ids);
    REQUIRE(in_w % 2 == 1);
    DirectedCycle c = extract_odd_cycle(s.d, s.d.weights(), s.walk);
    std::int64_t out_w = arc_weight_sum(s.d.weights(), c.arc_ids);
    CHECK(out_w % 2 == 1);
    CHECK(out_w <= in_w);
    CHECK(cycle_simple(s.d, c));
    CHECK(walk_closed(s.d, Walk{c.arc_ids}));
  }
}

TEST_CASE("minimum odd cycle matches brute force") {
  Rng rng(77);
  int yes = 0, no = 0;
  for (int trial = 0; trial < 300; ++trial) {
    WeightedDigraph d =
        gen_random_digraph(rng.int_in(2, 8), 0.35, 5, rng.below(1u << 30));
    auto fast = solve_mocp(d, d.weights());
    auto slow = brute_mocp(d, d.weights());
    REQUIRE(fast.has_value() == slow.has_value());
    if (!fast) {
      ++no;
      continue;
    }
    ++yes;
    CHECK(fast->weight == slow->weight);
    CHECK(fast->weight % 2 == 1);
    CHECK(arc_weight_sum(d.weights(), fast->cycle.arc_ids) == fast->weight);
    CHECK(cycle_simple(d, fast->cycle));
  }
  CHECK(yes >= 40);
  CHECK(no >= 40);
}

TEST_CASE("solver rejects negative weights") {
  WeightedDigraph d(2);
  d.add_arc(1, 2, 1);
  d.add_arc(2, 1, 2);
  std::vector<std::int64_t> w{1, -1};
  CHECK_THROWS_AS(solve_mocp(d, w), InputError);
}

TEST_CASE("digraph input validation") {
  CHECK_THROWS_AS(WeightedDigraph(0), InputError);
  WeightedDigraph d(2);
  CHECK_THROWS_AS(d.add_arc(1, 3, 0), InputError);
  CHECK_THROWS_AS(d.add_arc(1, 2, std::int64_t{1} << 40), InputError);
  CHECK(d.add_arc(1, 2, 5) == 0);
  CHECK(d.add_arc(1, 2, 5) == 1);  // parallel arcs are fine
}
