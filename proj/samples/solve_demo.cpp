// Generates a planted instance, solves it exactly, and replays the trace.

#include <cstdio>

#include "exmatch/bcpm.hpp"
#include "exmatch/io.hpp"
#include "exmatch/solver.hpp"

int main() {
  using namespace exmatch;

  PlantedEm planted = gen_planted_em(12, 4, /*seed=*/42);
  const ColoredGraph& g = planted.graph;
  std::printf("instance: n=%d m=%d k=%d\n%s", g.n(), g.m(), planted.k,
              render_instance(g, planted.k).c_str());

  BcpmOracle oracle = [](const ColoredGraph& h, int k) {
    return solve_bcpm_bruteforce(h, k);
  };
  SolverOutcome out = solve_em(g, planted.k, SolverConfig{}, oracle);
  if (out.kind != SolverOutcome::Kind::solution) {
    std::printf("no solution found\n");
    return 1;
  }
  std::printf("solved, phase %d, %zu trace events\n", out.phase_reached,
              out.trace.size());
  for (const TraceEvent& ev : out.trace)
    std::printf("  phase %d %-8s r(M)=%d r(M')=%d |delta|=%lld\n", ev.phase,
                ev.step.c_str(), ev.r_m, ev.r_mp,
                static_cast<long long>(ev.symdiff));
  std::printf("%s", render_matching_report(g, *out.matching).c_str());
  return 0;
}
