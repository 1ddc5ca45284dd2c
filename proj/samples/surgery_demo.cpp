// Walks through cycle surgery by hand: take two perfect matchings of a
// complete graph, list the skips available on their symmetric difference,
// apply the best negative one, and watch the red count and cycle sizes move.

#include <cstdio>

#include "exmatch/io.hpp"
#include "exmatch/skips.hpp"

using namespace exmatch;

static PerfectMatching pm_of_pairs(const ColoredGraph& g, const int* pairs, int half) {
  std::vector<int> ids;
  for (int i = 0; i < half; ++i) ids.push_back(g.edge_id(pairs[2 * i], pairs[2 * i + 1]));
  return PerfectMatching(g, std::move(ids));
}

int main() {
  ColoredGraph g = gen_complete(10, 0.5, /*seed=*/7);
  const int a[] = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const int b[] = {2, 3, 4, 5, 6, 7, 8, 9, 10, 1};  // shifted: one long cycle
  PerfectMatching m = pm_of_pairs(g, a, 5);
  PerfectMatching mp = pm_of_pairs(g, b, 5);

  AlternatingCycleSet cycles(g, m, mp);
  std::printf("r(M)=%d r(M')=%d, symmetric difference: %d cycles, %lld edges\n",
              m.red_count(), mp.red_count(), cycles.count(),
              static_cast<long long>(cycles.total_edges()));

  for (int ci = 0; ci < cycles.count(); ++ci) {
    std::vector<Skip> skips = enumerate_skips(g, cycles, ci, SkipMode::alpha);
    std::printf("cycle %d (length %d): %zu skips\n", ci, cycles.cycle(ci).length(),
                skips.size());
    const Skip* pick = nullptr;
    for (const Skip& s : skips)
      if (!pick || s.weight < pick->weight) pick = &s;
    if (!pick || pick->weight >= 0) continue;
    SurgeryResult res = use_skip(g, cycles, mp, *pick);
    std::printf("  applied skip of weight %d: r(M') %d -> %d, edges %lld -> %lld\n",
                pick->weight, mp.red_count(), res.other.red_count(),
                static_cast<long long>(cycles.total_edges()),
                static_cast<long long>(res.cycles.total_edges()));
    break;
  }
  return 0;
}
